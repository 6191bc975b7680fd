//! ε-permutahedra `Π_ε(ρ, k, m)`: the convex hull of all permutations of
//!
//! ```text
//! p_ε(ρ,k,m) = (ρ − (ε^{k+1} + … + ε^{k+m−1}), ε^{k+1}, …, ε^{k+m−1})
//! ```
//!
//! realized either by the `2^m − 2` Rado facets plus one mass equality, or
//! by a comparator network whose gates are relaxed to `u + v = a + b`,
//! `u ≥ a`, `u ≥ b`, with the output wires pinned to the sorted vector.
//! ε only ever appears on right-hand sides.

use num_traits::Zero;
use thiserror::Error;

use crate::eps_field::EpsPoly;
use crate::scalar::{Rational, Scalar};

/// Infosets with at most this many actions use the facet description.
pub const DEFAULT_FACET_THRESHOLD: usize = 8;

/// Networks are checked with the zero-one principle up to this many wires.
const ZERO_ONE_CHECK_LIMIT: usize = 20;

pub type VarId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("mass is smaller than ε^{k}")]
    MassTooSmall { k: usize },
    #[error("facet description of {m} coordinates exceeds the threshold {threshold}")]
    TooManyFacets { m: usize, threshold: usize },
    #[error("comparator network does not sort {wires} wires")]
    NetworkDoesNotSort { wires: usize },
    #[error("permutahedron needs at least one coordinate")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Eq,
    Ge,
    Le,
}

/// `Σ coeff·x_var (sense) rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub terms: Vec<(VarId, Rational)>,
    pub sense: Sense,
    pub rhs: EpsPoly,
}

impl LinearConstraint {
    pub fn new(terms: Vec<(VarId, Rational)>, sense: Sense, rhs: EpsPoly) -> Self {
        LinearConstraint { terms, sense, rhs }
    }

    pub fn lhs<T: Scalar>(&self, values: &[T]) -> T {
        self.terms
            .iter()
            .fold(T::zero(), |acc, (v, c)| acc + T::from_rational(c) * values[*v].clone())
    }

    /// Exact check at a numeric `ε₀`.
    pub fn holds_at(&self, values: &[Rational], eps: &Rational) -> bool {
        let lhs = self.lhs(values);
        let rhs = self.rhs.eval(eps);
        match self.sense {
            Sense::Eq => lhs == rhs,
            Sense::Ge => lhs >= rhs,
            Sense::Le => lhs <= rhs,
        }
    }

    /// Check in the ε-field, for all sufficiently small ε.
    pub fn holds_symbolically(&self, values: &[EpsPoly]) -> bool {
        let lhs = self
            .terms
            .iter()
            .fold(EpsPoly::zero(), |acc, (v, c)| acc + values[*v].scale(c));
        match self.sense {
            Sense::Eq => lhs == self.rhs,
            Sense::Ge => lhs >= self.rhs,
            Sense::Le => lhs <= self.rhs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Facet,
    Network,
}

/// Linear constraints describing one permutahedron over `primary`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintBlock {
    pub primary: Vec<VarId>,
    pub auxiliary: Vec<VarId>,
    pub constraints: Vec<LinearConstraint>,
    pub provenance: Provenance,
    /// Comparator gates as `(inputs, outputs)` variable pairs, in order.
    pub gates: Vec<((VarId, VarId), (VarId, VarId))>,
}

impl ConstraintBlock {
    /// Sets every wire to the exact sorted value implied by the primary
    /// variables: the larger input goes to the upper output.
    pub fn fill_wires<T: Scalar>(&self, values: &mut [T]) {
        for &((a, b), (u, v)) in &self.gates {
            let (hi, lo) = if values[a] >= values[b] { (a, b) } else { (b, a) };
            values[u] = values[hi].clone();
            values[v] = values[lo].clone();
        }
    }

    pub fn equalities(&self) -> usize {
        self.constraints.iter().filter(|c| c.sense == Sense::Eq).count()
    }

    pub fn inequalities(&self) -> usize {
        self.constraints.len() - self.equalities()
    }
}

/// Total mass of a permutahedron: a constant, or another variable (the
/// realization weight of the parent sequence).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mass {
    Constant(EpsPoly),
    Variable(VarId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermSpec {
    pub mass: EpsPoly,
    pub k: usize,
    pub m: usize,
}

impl PermSpec {
    pub fn new(mass: EpsPoly, k: usize, m: usize) -> Self {
        PermSpec { mass, k, m }
    }

    /// The symbolic base vector `p_ε(ρ,k,m)`.
    pub fn base_vector(&self) -> Result<Vec<EpsPoly>, PermError> {
        if self.m == 0 {
            return Err(PermError::Empty);
        }
        if self.mass < EpsPoly::eps_pow(self.k) {
            return Err(PermError::MassTooSmall { k: self.k });
        }
        let mut p = vec![&self.mass - &tail_sum(self.k, self.m)];
        p.extend((1..self.m).map(|i| EpsPoly::eps_pow(self.k + i)));
        Ok(p)
    }
}

/// `ε^{k+1} + … + ε^{k+m−1}`.
fn tail_sum(k: usize, m: usize) -> EpsPoly {
    EpsPoly::eps_range(k + 1, k + m - 1)
}

/// Sum of the `s` smallest entries of `p_ε(·,k,m)`, for `s < m`:
/// `ε^{k+m−s} + … + ε^{k+m−1}`.
pub fn facet_bound(k: usize, m: usize, s: usize) -> EpsPoly {
    assert!(s < m, "facet bound only defined for proper subsets");
    if s == 0 {
        return EpsPoly::zero();
    }
    EpsPoly::eps_range(k + m - s, k + m - 1)
}

/// Numeric base vector `p_ε(ρ,k,m)` for concrete `ρ` and `ε`.
pub fn base_vector<T: Scalar>(rho: &T, k: usize, m: usize, eps: &T) -> Result<Vec<T>, PermError> {
    if m == 0 {
        return Err(PermError::Empty);
    }
    if *rho < eps.powu(k as u32) {
        return Err(PermError::MassTooSmall { k });
    }
    let tail: Vec<T> = (1..m).map(|i| eps.powu((k + i) as u32)).collect();
    let head = tail.iter().fold(rho.clone(), |acc, t| acc - t.clone());
    let mut p = vec![head];
    p.extend(tail);
    Ok(p)
}

fn mass_equality(mass: &Mass, primary: &[VarId]) -> LinearConstraint {
    let mut terms: Vec<(VarId, Rational)> = primary.iter().map(|&v| (v, Rational::from_integer(1.into()))).collect();
    match mass {
        Mass::Constant(rho) => LinearConstraint::new(terms, Sense::Eq, rho.clone()),
        Mass::Variable(parent) => {
            terms.push((*parent, Rational::from_integer((-1).into())));
            LinearConstraint::new(terms, Sense::Eq, EpsPoly::zero())
        }
    }
}

/// Rado facets over the given primary variables.
pub fn facet_block(
    mass: &Mass,
    k: usize,
    primary: &[VarId],
    threshold: usize,
) -> Result<ConstraintBlock, PermError> {
    let m = primary.len();
    if m == 0 {
        return Err(PermError::Empty);
    }
    if m > threshold {
        return Err(PermError::TooManyFacets { m, threshold });
    }
    let one = Rational::from_integer(1.into());
    let mut constraints = vec![mass_equality(mass, primary)];
    let full = (1u64 << m) - 1;
    for subset in 1..full {
        let terms: Vec<_> = (0..m)
            .filter(|&i| subset >> i & 1 == 1)
            .map(|i| (primary[i], one.clone()))
            .collect();
        let bound = facet_bound(k, m, terms.len());
        constraints.push(LinearConstraint::new(terms, Sense::Ge, bound));
    }
    Ok(ConstraintBlock {
        primary: primary.to_vec(),
        auxiliary: Vec::new(),
        constraints,
        provenance: Provenance::Facet,
        gates: Vec::new(),
    })
}

/// Facet system of a standalone permutahedron over variables `0..m`.
pub fn facet_system(spec: &PermSpec) -> Result<ConstraintBlock, PermError> {
    spec.base_vector()?;
    let primary: Vec<VarId> = (0..spec.m).collect();
    facet_block(
        &Mass::Constant(spec.mass.clone()),
        spec.k,
        &primary,
        DEFAULT_FACET_THRESHOLD,
    )
}

/// Hands out fresh variable ids.
#[derive(Debug, Clone, Default)]
pub struct VarPool {
    next: VarId,
}

impl VarPool {
    pub fn starting_at(next: VarId) -> Self {
        VarPool { next }
    }

    pub fn fresh(&mut self) -> VarId {
        self.next += 1;
        self.next - 1
    }

    pub fn len(&self) -> usize {
        self.next
    }

    pub fn is_empty(&self) -> bool {
        self.next == 0
    }
}

/// Comparator network on `wires` wires; gate `(i, j)` with `i < j` moves
/// the larger value to wire `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparatorNetwork {
    pub wires: usize,
    pub gates: Vec<(usize, usize)>,
}

impl ComparatorNetwork {
    pub fn apply<T: PartialOrd + Clone>(&self, input: &mut [T]) {
        for &(i, j) in &self.gates {
            if input[j] > input[i] {
                input.swap(i, j);
            }
        }
    }

    /// Zero-one principle: a network sorts every input iff it sorts every
    /// 0/1 input.
    pub fn sorts(&self) -> bool {
        if self.wires > 63 {
            return false;
        }
        (0u64..1 << self.wires).all(|bits| {
            let mut v: Vec<u8> = (0..self.wires).map(|i| (bits >> i & 1) as u8).collect();
            self.apply(&mut v);
            v.windows(2).all(|w| w[0] >= w[1])
        })
    }
}

/// Batcher's odd-even mergesort, truncated to `m` wires.
pub fn batcher_network(m: usize) -> ComparatorNetwork {
    let mut n = 1;
    while n < m {
        n <<= 1;
    }
    let mut gates = Vec::new();
    let mut p = 1;
    while p < n {
        let mut k = p;
        while k >= 1 {
            let mut j = k % p;
            while j + k < n {
                for i in 0..k.min(n - j - k) {
                    let a = i + j;
                    let b = i + j + k;
                    if a / (2 * p) == b / (2 * p) && b < m {
                        gates.push((a, b));
                    }
                }
                j += 2 * k;
            }
            k /= 2;
        }
        p <<= 1;
    }
    // Padding wires hold −∞ at the bottom, so gates touching them are no-ops.
    ComparatorNetwork { wires: m, gates }
}

/// Network extended formulation over the given primary variables; wire
/// variables are drawn from `pool`.
pub fn network_block(
    mass: &Mass,
    k: usize,
    primary: &[VarId],
    net: &ComparatorNetwork,
    pool: &mut VarPool,
) -> Result<ConstraintBlock, PermError> {
    let m = primary.len();
    if m == 0 {
        return Err(PermError::Empty);
    }
    if net.wires != m || (m <= ZERO_ONE_CHECK_LIMIT && !net.sorts()) {
        return Err(PermError::NetworkDoesNotSort { wires: m });
    }
    let one = Rational::from_integer(1.into());
    let neg = -one.clone();
    let mut wire: Vec<VarId> = primary.to_vec();
    let mut auxiliary = Vec::new();
    let mut constraints = Vec::new();
    let mut gates = Vec::new();
    for &(i, j) in &net.gates {
        let (a, b) = (wire[i], wire[j]);
        let u = pool.fresh();
        let v = pool.fresh();
        auxiliary.extend([u, v]);
        constraints.push(LinearConstraint::new(
            vec![(u, one.clone()), (v, one.clone()), (a, neg.clone()), (b, neg.clone())],
            Sense::Eq,
            EpsPoly::zero(),
        ));
        constraints.push(LinearConstraint::new(vec![(u, one.clone()), (a, neg.clone())], Sense::Ge, EpsPoly::zero()));
        constraints.push(LinearConstraint::new(vec![(u, one.clone()), (b, neg.clone())], Sense::Ge, EpsPoly::zero()));
        gates.push(((a, b), (u, v)));
        wire[i] = u;
        wire[j] = v;
    }
    let tail = tail_sum(k, m);
    constraints.push(match mass {
        Mass::Constant(rho) => LinearConstraint::new(vec![(wire[0], one.clone())], Sense::Eq, rho - &tail),
        Mass::Variable(parent) => LinearConstraint::new(
            vec![(wire[0], one.clone()), (*parent, neg.clone())],
            Sense::Eq,
            -tail,
        ),
    });
    for (w, &var) in wire.iter().enumerate().skip(1) {
        constraints.push(LinearConstraint::new(vec![(var, one.clone())], Sense::Eq, EpsPoly::eps_pow(k + w)));
    }
    Ok(ConstraintBlock {
        primary: primary.to_vec(),
        auxiliary,
        constraints,
        provenance: Provenance::Network,
        gates,
    })
}

/// Network system of a standalone permutahedron: primary variables `0..m`,
/// wires from `m` on.
pub fn network_system(spec: &PermSpec, net: &ComparatorNetwork) -> Result<ConstraintBlock, PermError> {
    spec.base_vector()?;
    let primary: Vec<VarId> = (0..spec.m).collect();
    let mut pool = VarPool::starting_at(spec.m);
    network_block(&Mass::Constant(spec.mass.clone()), spec.k, &primary, net, &mut pool)
}

/// Facets when `m ≤ threshold`, otherwise a Batcher network.
pub fn permutahedron_block(
    mass: &Mass,
    k: usize,
    primary: &[VarId],
    threshold: usize,
    pool: &mut VarPool,
) -> Result<ConstraintBlock, PermError> {
    if primary.len() <= threshold {
        facet_block(mass, k, primary, threshold)
    } else {
        network_block(mass, k, primary, &batcher_network(primary.len()), pool)
    }
}

/// Exact membership of `x` in `Π_{ε₀}(ρ(ε₀), k, m)` via the facet
/// inequalities. Each facet family of size `s` is checked through its
/// tightest member: the `s` smallest coordinates.
pub fn membership(spec: &PermSpec, x: &[Rational], eps: &Rational) -> bool {
    if x.len() != spec.m || spec.m == 0 {
        return false;
    }
    let rho = spec.mass.eval(eps);
    let total: Rational = x.iter().sum();
    if total != rho {
        return false;
    }
    if spec.m <= DEFAULT_FACET_THRESHOLD {
        let block = facet_system(spec).expect("within threshold");
        return block.constraints.iter().all(|c| c.holds_at(x, eps));
    }
    let mut sorted = x.to_vec();
    sorted.sort();
    let mut prefix = Rational::zero();
    for (s, v) in sorted.iter().enumerate().take(spec.m - 1) {
        prefix += v;
        if prefix < facet_bound(spec.k, spec.m, s + 1).eval(eps) {
            return false;
        }
    }
    true
}
