use std::collections::BTreeMap;

use rayon::prelude::*;
use rug::{Integer, Rational};

use super::termsum::{AxisForm, BaseKind, CompiledForm, TermSum};
use crate::error::{Error, Result};

/// Size guard for symbolic tensor operations (`N^k` components).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymbolicLimits {
    pub max_rank: usize,
    pub max_dim: usize,
}

impl Default for SymbolicLimits {
    fn default() -> Self {
        SymbolicLimits {
            max_rank: 6,
            max_dim: 8,
        }
    }
}

impl SymbolicLimits {
    pub fn unlimited() -> Self {
        SymbolicLimits {
            max_rank: usize::MAX,
            max_dim: usize::MAX,
        }
    }

    fn check(&self, dim: usize, rank: usize) -> Result<()> {
        if rank > self.max_rank || dim > self.max_dim {
            return Err(Error::Limit(format!(
                "rank {rank} in dimension {dim} exceeds the limit (rank <= {}, dimension <= {})",
                self.max_rank, self.max_dim
            )));
        }
        Ok(())
    }
}

/// A rank-k tensor field with [`TermSum`] components.
///
/// Fields built as gradients of a scalar are stored symmetrically: only
/// sorted index tuples are kept and every other component is recovered by
/// permutation. Zero components are not stored.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorField {
    dim: usize,
    rank: usize,
    base: BaseKind,
    symmetric: bool,
    components: BTreeMap<Vec<u8>, TermSum>,
}

impl TensorField {
    pub fn scalar(t: TermSum) -> Self {
        let mut components = BTreeMap::new();
        let dim = t.dim();
        let base = t.base().clone();
        if !t.is_zero() {
            components.insert(Vec::new(), t);
        }
        TensorField {
            dim,
            rank: 0,
            base,
            symmetric: true,
            components,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn base(&self) -> &BaseKind {
        &self.base
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Total number of components, `N^k`.
    pub fn component_count(&self) -> u128 {
        (self.dim as u128).pow(self.rank as u32)
    }

    /// Number of stored (nonzero, canonical) components.
    pub fn stored_components(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, index: &[usize]) -> TermSum {
        assert_eq!(index.len(), self.rank, "index length must equal the rank");
        let mut key: Vec<u8> = index.iter().map(|&i| i as u8).collect();
        if self.symmetric {
            key.sort_unstable();
        }
        self.components
            .get(&key)
            .cloned()
            .unwrap_or_else(|| TermSum::zero(self.dim, self.base.clone()))
    }

    /// Gradient: `(∇T)_{i_1…i_k j} = ∂_j T_{i_1…i_k}`.
    pub fn grad(&self) -> TensorField {
        let dim = self.dim;
        let components: BTreeMap<Vec<u8>, TermSum> = if self.symmetric {
            // Every sorted (k+1)-tuple arises from a stored sorted k-tuple by
            // appending an index ≥ its last entry.
            let pairs: Vec<(Vec<u8>, u8)> = self
                .components
                .keys()
                .flat_map(|k| {
                    let start = k.last().copied().unwrap_or(0);
                    (start..dim as u8).map(move |j| (k.clone(), j))
                })
                .collect();
            pairs
                .into_par_iter()
                .filter_map(|(k, j)| {
                    let d = self.components[&k].partial(j as usize);
                    if d.is_zero() {
                        return None;
                    }
                    let mut key = k;
                    key.push(j);
                    Some((key, d))
                })
                .collect::<Vec<_>>()
                .into_iter()
                .collect()
        } else {
            let pairs: Vec<(&Vec<u8>, u8)> = self
                .components
                .keys()
                .flat_map(|k| (0..dim as u8).map(move |j| (k, j)))
                .collect();
            pairs
                .into_par_iter()
                .filter_map(|(k, j)| {
                    let d = self.components[k].partial(j as usize);
                    if d.is_zero() {
                        return None;
                    }
                    let mut key = k.clone();
                    key.push(j);
                    Some((key, d))
                })
                .collect::<Vec<_>>()
                .into_iter()
                .collect()
        };
        TensorField {
            dim,
            rank: self.rank + 1,
            base: self.base.clone(),
            symmetric: self.symmetric,
            components,
        }
    }

    /// Multiplies every component by `r^q`.
    pub fn mul_radial_power(&self, q: &Rational) -> TensorField {
        TensorField {
            dim: self.dim,
            rank: self.rank,
            base: self.base.clone(),
            symmetric: self.symmetric,
            components: self
                .components
                .iter()
                .map(|(k, v)| (k.clone(), v.mul_radial_power(q)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    /// Divergence in the last index: `S_{i_1…i_{k−1}} = Σ_j ∂_j T_{i_1…i_{k−1} j}`.
    pub fn contract_last(&self) -> Result<TensorField> {
        if self.rank == 0 {
            return Err(Error::domain("divergence of a rank-0 field"));
        }
        let dim = self.dim;
        let mut out: BTreeMap<Vec<u8>, TermSum> = BTreeMap::new();
        if self.symmetric {
            // Sorted (k−1)-tuples σ; the component T[σ ∪ j] is looked up by sorting.
            let targets: Vec<Vec<u8>> = sorted_tuples(dim, self.rank - 1);
            let results: Vec<(Vec<u8>, TermSum)> = targets
                .into_par_iter()
                .map(|sigma| {
                    let mut acc = TermSum::zero(dim, self.base.clone());
                    for j in 0..dim as u8 {
                        let mut key = sigma.clone();
                        key.push(j);
                        key.sort_unstable();
                        if let Some(c) = self.components.get(&key) {
                            acc.add_assign(&c.partial(j as usize));
                        }
                    }
                    (sigma, acc)
                })
                .collect();
            for (k, v) in results {
                if !v.is_zero() {
                    out.insert(k, v);
                }
            }
        } else {
            for (k, c) in &self.components {
                let (sigma, j) = k.split_at(self.rank - 1);
                let d = c.partial(j[0] as usize);
                out.entry(sigma.to_vec())
                    .or_insert_with(|| TermSum::zero(dim, self.base.clone()))
                    .add_assign(&d);
            }
            out.retain(|_, v| !v.is_zero());
        }
        Ok(TensorField {
            dim,
            rank: self.rank - 1,
            base: self.base.clone(),
            symmetric: self.symmetric,
            components: out,
        })
    }

    /// Full contraction `div_k T = Σ ∂_{i_1}⋯∂_{i_k} T_{i_1…i_k}`.
    pub fn div_full(&self) -> Result<TermSum> {
        if self.rank == 0 {
            return Err(Error::domain("div_k needs a field of rank >= 1"));
        }
        let mut t = self.clone();
        while t.rank > 0 {
            t = t.contract_last()?;
        }
        Ok(t
            .components
            .remove(&Vec::new())
            .unwrap_or_else(|| TermSum::zero(self.dim, self.base.clone())))
    }

    /// Restriction of all components to `(r, 0, …, 0)`, with multiplicities.
    pub fn axis_norm(&self) -> AxisNorm {
        let rows = self
            .components
            .iter()
            .filter_map(|(k, v)| {
                let form = v.on_axis();
                if form.is_zero() {
                    return None;
                }
                let mult = if self.symmetric {
                    multinomial(k)
                } else {
                    Integer::from(1)
                };
                Some((mult, form))
            })
            .collect();
        AxisNorm {
            dim: self.dim,
            rank: self.rank,
            base: self.base.clone(),
            rows,
        }
    }

    /// Checks that `∂_a ∂_b` commute on every stored component, i.e. that the
    /// full (unsymmetrized) gradient would be symmetric.
    pub fn symmetry_defect(&self) -> usize {
        let mut defects = 0;
        for (k, v) in &self.components {
            for a in 0..self.dim {
                for b in (a + 1)..self.dim {
                    if v.partial(a).partial(b) != v.partial(b).partial(a) {
                        defects += 1;
                    }
                }
            }
            let _ = k;
        }
        defects
    }
}

fn sorted_tuples(dim: usize, len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for t in &out {
            let start = t.last().copied().unwrap_or(0);
            for j in start..dim as u8 {
                let mut n = t.clone();
                n.push(j);
                next.push(n);
            }
        }
        out = next;
    }
    out
}

/// Number of distinct permutations of a sorted index tuple.
fn multinomial(sorted: &[u8]) -> Integer {
    let mut m = Integer::factorial(sorted.len() as u32).complete();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        m /= Integer::factorial((j - i) as u32).complete();
        i = j;
    }
    m
}

use rug::Complete;

/// `|T|²` on the axis as `Σ_rows mult · (row)²`.
#[derive(Clone, Debug)]
pub struct AxisNorm {
    pub dim: usize,
    pub rank: usize,
    pub base: BaseKind,
    pub rows: Vec<(Integer, AxisForm)>,
}

impl AxisNorm {
    /// Exact `|T(r e_1)|²` for a concrete base at a rational radius.
    pub fn eval_exact(&self, r: &Rational) -> Result<Rational> {
        let mut acc = Rational::new();
        for (m, form) in &self.rows {
            let v = form.eval_exact(&self.base, r)?;
            acc += Rational::from(&v * &v) * m;
        }
        Ok(acc)
    }

    pub fn compile(&self) -> CompiledNorm {
        CompiledNorm {
            rows: self
                .rows
                .iter()
                .map(|(m, f)| (m.to_f64(), f.compile()))
                .collect(),
        }
    }
}

/// Float evaluation plan for `|T|` on the axis, given the derivative factors
/// of the base function at the evaluation point.
#[derive(Clone, Debug)]
pub struct CompiledNorm {
    rows: Vec<(f64, CompiledForm)>,
}

impl CompiledNorm {
    pub fn norm_sq(&self, r: f64, derivs: &[f64]) -> f64 {
        self.rows
            .iter()
            .map(|(m, f)| {
                let v = f.eval(r, derivs);
                m * v * v
            })
            .sum()
    }

    /// `Σ mult · T_a · T_b` for two functions sharing this tensor shape.
    pub fn inner(&self, r: f64, a: &[f64], b: &[f64]) -> f64 {
        self.rows
            .iter()
            .map(|(m, f)| m * f.eval(r, a) * f.eval(r, b))
            .sum()
    }
}

/// `∇^k v` for the given base, refusing oversized requests.
pub fn gradient_tensor(
    dim: usize,
    base: BaseKind,
    k: usize,
    limits: SymbolicLimits,
) -> Result<TensorField> {
    if dim < 2 {
        return Err(Error::domain("dimension must be at least 2"));
    }
    limits.check(dim, k)?;
    let mut t = TensorField::scalar(TermSum::base_function(dim, base));
    for _ in 0..k {
        t = t.grad();
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multinomials() {
        assert_eq!(multinomial(&[0, 0, 1]), 3);
        assert_eq!(multinomial(&[0, 1, 2]), 6);
        assert_eq!(multinomial(&[]), 1);
    }

    #[test]
    fn sorted_tuple_count() {
        // C(N + k − 1, k)
        assert_eq!(sorted_tuples(4, 3).len(), 20);
        assert_eq!(sorted_tuples(3, 0).len(), 1);
    }

    #[test]
    fn hessian_of_log_matches_hand_computation() {
        let h = gradient_tensor(3, BaseKind::Log, 2, SymbolicLimits::default()).unwrap();
        assert_eq!(h.rank(), 2);
        // ∂_1∂_1 log r = 1/r² − 2x_1²/r⁴ ; ∂_1∂_2 log r = −2x_1x_2/r⁴
        let d11 = h.component(&[0, 0]).to_string();
        let d12 = h.component(&[0, 1]).to_string();
        assert_eq!(d11, "(1)·r^(-2) + (-2)·x1^2·r^(-4)");
        assert_eq!(d12, "(-2)·x1^1·x2^1·r^(-4)");
        assert_eq!(h.component(&[1, 0]), h.component(&[0, 1]));
    }

    #[test]
    fn limits_refuse_large_requests() {
        let err = gradient_tensor(9, BaseKind::Log, 2, SymbolicLimits::default());
        assert!(matches!(err, Err(Error::Limit(_))));
        assert!(gradient_tensor(9, BaseKind::Log, 1, SymbolicLimits::unlimited()).is_ok());
    }

    #[test]
    fn symmetric_and_plain_divergence_agree() {
        let t = gradient_tensor(3, BaseKind::Power(Rational::from(3)), 2, SymbolicLimits::default())
            .unwrap();
        let mut plain = t.clone();
        plain.symmetric = false;
        plain.components = BTreeMap::new();
        for a in 0..3usize {
            for b in 0..3usize {
                let c = t.component(&[a, b]);
                if !c.is_zero() {
                    plain.components.insert(vec![a as u8, b as u8], c);
                }
            }
        }
        assert_eq!(t.div_full().unwrap(), plain.div_full().unwrap());
    }
}
