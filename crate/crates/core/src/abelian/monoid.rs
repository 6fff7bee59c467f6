//! Finitely generated submonoids of f.g. abelian groups.
//!
//! Membership is decided in two stages. First the invertible generators are
//! found exactly: `g` is invertible iff `-g` lies in the rational cone spanned
//! by the free parts of all generators, which is checked over the
//! linearly independent subsets of generators. Modulo the unit group the
//! monoid is pointed, so an integer functional `λ` vanishing on units and
//! positive on every other generator exists; it is found by a perceptron on
//! the projected generators. Any representation of `x` then uses non-unit
//! generators with total `λ`-weight exactly `λ(x)`, which turns membership
//! into a finite search in the quotient by the unit group.
//!
//! When the structure cannot be computed within budget the search falls back
//! to plain breadth-first enumeration by `Σ t_i`, which can only answer `Yes`
//! or `Unknown`.

use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::cmp::Reverse;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::group::{quotient, subgroup, AbelianHom, FgAbelianGroup, Subgroup};
use super::matrix::IntMatrix;
use super::snf::left_kernel;
use crate::error::{Error, Result};
use crate::tri::Tri;

pub const DEFAULT_BOUND: u64 = 512;

/// Number of independent generator subsets inspected per unit test.
const SUBSET_BUDGET: usize = 1 << 16;
const PERCEPTRON_BUDGET: usize = 100_000;
/// Search nodes allowed per unit of bound.
const NODES_PER_BOUND: usize = 1024;

#[derive(Clone, Debug)]
pub struct Membership {
    pub value: Tri,
    /// Coefficients `t` over the generator list with `Σ t_i g_i = x`.
    pub coefficients: Option<Vec<BigInt>>,
}

#[derive(Debug)]
struct Structure {
    /// For each generator: `Some(t)` with `Σ t_i g_i = -g` if invertible.
    negations: Vec<Option<Vec<BigInt>>>,
    units: Subgroup,
    unit_indices: Vec<usize>,
    /// Certificate on free coordinates; zero on units, positive elsewhere.
    lambda: Vec<BigInt>,
    projection: AbelianHom,
}

#[derive(Debug)]
pub struct AffineMonoid {
    ambient: FgAbelianGroup,
    generators: Vec<Vec<BigInt>>,
    default_bound: u64,
    structure: OnceLock<Option<Structure>>,
}

impl Clone for AffineMonoid {
    fn clone(&self) -> Self {
        AffineMonoid {
            ambient: self.ambient.clone(),
            generators: self.generators.clone(),
            default_bound: self.default_bound,
            structure: OnceLock::new(),
        }
    }
}

impl AffineMonoid {
    pub fn new(ambient: FgAbelianGroup, generators: Vec<Vec<BigInt>>, default_bound: u64) -> Result<Self> {
        if default_bound == 0 {
            return Err(Error::validation("search bound must be positive"));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.len() != ambient.dim() {
                return Err(Error::validation_with(
                    "generator has wrong number of coordinates",
                    format!("generator {} has {} coordinates, {} expected", i + 1, g.len(), ambient.dim()),
                ));
            }
        }
        let generators = generators.iter().map(|g| ambient.normalize(g)).collect();
        Ok(AffineMonoid {
            ambient,
            generators,
            default_bound,
            structure: OnceLock::new(),
        })
    }

    pub fn ambient(&self) -> &FgAbelianGroup {
        &self.ambient
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    pub fn default_bound(&self) -> u64 {
        self.default_bound
    }

    fn structure(&self) -> Option<&Structure> {
        self.structure.get_or_init(|| compute_structure(&self.ambient, &self.generators)).as_ref()
    }

    pub fn contains(&self, x: &[BigInt]) -> Tri {
        self.member(x, self.default_bound).value
    }

    pub fn member(&self, x: &[BigInt], bound: u64) -> Membership {
        let x = self.ambient.normalize(x);
        if x.iter().all(Zero::is_zero) {
            return Membership {
                value: Tri::Yes,
                coefficients: Some(vec![BigInt::zero(); self.generators.len()]),
            };
        }
        match self.structure() {
            Some(s) => self.member_exact(s, &x, bound),
            None => self.member_bfs(&x, bound),
        }
    }

    fn member_exact(&self, s: &Structure, x: &[BigInt], bound: u64) -> Membership {
        let level = |v: &[BigInt]| -> BigInt { s.lambda.iter().zip(v).map(|(a, b)| a * b).sum() };
        let unknown = Membership {
            value: Tri::unknown(bound),
            coefficients: None,
        };
        let target_level = level(x);
        if target_level.is_negative() {
            return Membership {
                value: Tri::No,
                coefficients: None,
            };
        }
        let Some(target_level) = target_level.to_u64() else {
            return unknown;
        };
        let steps: Vec<(usize, u64, Vec<BigInt>)> = (0..self.generators.len())
            .filter(|i| s.negations[*i].is_none())
            .map(|i| {
                let g = &self.generators[i];
                let l = level(g).to_u64().unwrap_or(u64::MAX);
                (i, l, s.projection.apply(g))
            })
            .collect();
        let goal = s.projection.apply(x);
        let cap = (bound as usize).saturating_mul(NODES_PER_BOUND);

        let zero = s.projection.target.zero();
        let mut pred: HashMap<Vec<BigInt>, Option<(Vec<BigInt>, usize)>> = HashMap::new();
        pred.insert(zero.clone(), None);
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0u64, zero)));
        let mut found = false;
        while let Some(Reverse((l, v))) = heap.pop() {
            if v == goal {
                found = true;
                break;
            }
            for (i, gl, gp) in &steps {
                let nl = l.saturating_add(*gl);
                if nl > target_level {
                    continue;
                }
                let nv = s.projection.target.add(&v, gp);
                if pred.contains_key(&nv) {
                    continue;
                }
                if pred.len() >= cap {
                    return unknown;
                }
                pred.insert(nv.clone(), Some((v.clone(), *i)));
                heap.push(Reverse((nl, nv)));
            }
        }
        if !found {
            return Membership {
                value: Tri::No,
                coefficients: None,
            };
        }

        let mut t = vec![BigInt::zero(); self.generators.len()];
        let mut cur = goal;
        while let Some(Some((prev, i))) = pred.get(&cur) {
            t[*i] += 1;
            cur = prev.clone();
        }
        let mut residual = x.to_vec();
        for (i, ti) in t.iter().enumerate() {
            residual = self.ambient.sub(&residual, &self.ambient.scale(ti, &self.generators[i]));
        }
        let c = s
            .units
            .generator_coefficients(&residual)
            .expect("residual lies in the unit group");
        for (j, cj) in c.iter().enumerate() {
            let u = s.unit_indices[j];
            if cj.is_negative() {
                let neg = s.negations[u].as_ref().expect("unit has a negation");
                for (k, nk) in neg.iter().enumerate() {
                    t[k] += nk * -cj;
                }
            } else {
                t[u] += cj;
            }
        }
        Membership {
            value: Tri::Yes,
            coefficients: Some(t),
        }
    }

    fn member_bfs(&self, x: &[BigInt], bound: u64) -> Membership {
        let cap = (bound as usize).saturating_mul(NODES_PER_BOUND);
        let mut pred: HashMap<Vec<BigInt>, Option<(Vec<BigInt>, usize)>> = HashMap::new();
        let zero = self.ambient.zero();
        pred.insert(zero.clone(), None);
        let mut queue = VecDeque::from([(zero, 0u64)]);
        let mut exhausted = true;
        let mut found = false;
        'search: while let Some((v, depth)) = queue.pop_front() {
            if v == x {
                found = true;
                break;
            }
            if depth >= bound {
                exhausted = false;
                continue;
            }
            for (i, g) in self.generators.iter().enumerate() {
                let nv = self.ambient.add(&v, g);
                if pred.contains_key(&nv) {
                    continue;
                }
                if pred.len() >= cap {
                    exhausted = false;
                    break 'search;
                }
                pred.insert(nv.clone(), Some((v.clone(), i)));
                queue.push_back((nv, depth + 1));
            }
        }
        if found {
            let mut t = vec![BigInt::zero(); self.generators.len()];
            let mut cur = x.to_vec();
            while let Some(Some((prev, i))) = pred.get(&cur) {
                t[*i] += 1;
                cur = prev.clone();
            }
            return Membership {
                value: Tri::Yes,
                coefficients: Some(t),
            };
        }
        let value = if exhausted && self.ambient.is_finite() {
            Tri::No
        } else {
            Tri::unknown(bound)
        };
        Membership {
            value,
            coefficients: None,
        }
    }

    /// Per generator: whether its negation lies in the monoid.
    pub fn invertibility(&self) -> Vec<Tri> {
        match self.structure() {
            Some(s) => s.negations.iter().map(|n| Tri::from_bool(n.is_some())).collect(),
            None => self
                .generators
                .iter()
                .map(|g| self.contains(&self.ambient.neg(g)))
                .collect(),
        }
    }

    /// Generators whose negation lies in the monoid, when this is decided.
    pub fn invertible_generators(&self) -> Option<Vec<Vec<BigInt>>> {
        let inv = self.invertibility();
        if inv.iter().any(|t| t.is_unknown()) {
            return None;
        }
        Some(
            self.generators
                .iter()
                .zip(&inv)
                .filter(|(_, t)| t.is_yes())
                .map(|(g, _)| g.clone())
                .collect(),
        )
    }

    /// Every generator invertible (the monoid is a group). On `No` the first
    /// non-invertible generator is returned.
    pub fn is_gregarious(&self) -> (Tri, Option<Vec<BigInt>>) {
        let inv = self.invertibility();
        if let Some(i) = inv.iter().position(|t| t.is_no()) {
            return (Tri::No, Some(self.generators[i].clone()));
        }
        (Tri::all(inv), None)
    }

    /// Positivity certificate on the free coordinates, if computed.
    pub fn certificate(&self) -> Option<&[BigInt]> {
        self.structure().map(|s| s.lambda.as_slice())
    }

    pub fn is_exact(&self) -> bool {
        self.structure().is_some()
    }
}

/// The group generated by a monoid together with the monoid in that group's
/// own coordinates.
#[derive(Clone, Debug)]
pub struct Completion {
    pub subgroup: Subgroup,
    pub monoid: AffineMonoid,
}

pub fn grothendieck_completion(m: &AffineMonoid) -> Completion {
    let sub = subgroup(&m.ambient, &m.generators);
    let gens = m
        .generators
        .iter()
        .map(|g| sub.coordinates(g).expect("generator lies in the generated subgroup"))
        .collect();
    let monoid = AffineMonoid::new(sub.group.clone(), gens, m.default_bound).expect("coordinates have the subgroup's dimension");
    Completion { subgroup: sub, monoid }
}

fn compute_structure(ambient: &FgAbelianGroup, gens: &[Vec<BigInt>]) -> Option<Structure> {
    let r = ambient.rank();
    let free: Vec<Vec<BigRational>> = gens
        .iter()
        .map(|g| g[..r].iter().map(|c| BigRational::from_integer(c.clone())).collect())
        .collect();

    let mut negations = Vec::with_capacity(gens.len());
    for (j, g) in gens.iter().enumerate() {
        let target: Vec<BigRational> = free[j].iter().map(|c| -c).collect();
        let coeffs = match cone_combination(&free, &target)? {
            Some(a) => a,
            None => {
                negations.push(None);
                continue;
            }
        };
        negations.push(Some(integral_negation(ambient, gens, j, g, &coeffs)));
    }

    let unit_indices: Vec<usize> = (0..gens.len()).filter(|&i| negations[i].is_some()).collect();
    let unit_gens: Vec<Vec<BigInt>> = unit_indices.iter().map(|&i| gens[i].clone()).collect();
    let units = subgroup(ambient, &unit_gens);
    let (_, projection) = quotient(ambient, &unit_gens);
    let non_units: Vec<usize> = (0..gens.len()).filter(|&i| negations[i].is_none()).collect();
    let lambda = positivity_certificate(r, &unit_gens, &non_units.iter().map(|&i| gens[i].clone()).collect::<Vec<_>>())?;
    Some(Structure {
        negations,
        units,
        unit_indices,
        lambda,
        projection,
    })
}

/// Turns a rational relation `-f(g) = Σ a_i f(g_i)` on free parts into a
/// nonnegative integer combination equal to `-g` in the ambient.
fn integral_negation(
    ambient: &FgAbelianGroup,
    gens: &[Vec<BigInt>],
    j: usize,
    g: &[BigInt],
    coeffs: &[BigRational],
) -> Vec<BigInt> {
    let den = coeffs.iter().fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
    let mut rel: Vec<BigInt> = coeffs.iter().map(|a| (a * BigRational::from_integer(den.clone())).to_integer()).collect();
    rel[j] += &den;
    let mut z = ambient.zero();
    for (i, c) in rel.iter().enumerate() {
        z = ambient.add(&z, &ambient.scale(c, &gens[i]));
    }
    debug_assert!(z[..ambient.rank()].iter().all(Zero::is_zero));
    let order = torsion_order(ambient, &z);
    let mut t: Vec<BigInt> = rel.iter().map(|c| c * &order).collect();
    t[j] -= 1;
    debug_assert!({
        let mut s = ambient.zero();
        for (i, c) in t.iter().enumerate() {
            s = ambient.add(&s, &ambient.scale(c, &gens[i]));
        }
        s == ambient.neg(g)
    });
    t
}

fn torsion_order(ambient: &FgAbelianGroup, z: &[BigInt]) -> BigInt {
    ambient
        .torsion()
        .iter()
        .zip(&z[ambient.rank()..])
        .fold(BigInt::one(), |acc, (d, c)| acc.lcm(&(d / d.gcd(c))))
}

/// Nonnegative rational `a` with `Σ a_i w_i = target`, searched over linearly
/// independent subsets (Carathéodory). Outer `None` means the budget ran out.
fn cone_combination(w: &[Vec<BigRational>], target: &[BigRational]) -> Option<Option<Vec<BigRational>>> {
    if target.iter().all(Zero::is_zero) {
        return Some(Some(vec![BigRational::zero(); w.len()]));
    }
    let dim = target.len();
    let candidates: Vec<usize> = (0..w.len()).filter(|&i| w[i].iter().any(|c| !c.is_zero())).collect();
    let mut budget = SUBSET_BUDGET;
    let mut chosen = Vec::new();
    let found = subsets(&candidates, 0, dim, &mut chosen, &mut budget, &mut |subset| {
        let cols: Vec<&[BigRational]> = subset.iter().map(|&i| w[i].as_slice()).collect();
        solve_independent(&cols, target).filter(|a| a.iter().all(|c| !c.is_negative()))
    });
    match found {
        Search::Found(subset, a) => {
            let mut out = vec![BigRational::zero(); w.len()];
            for (k, &i) in subset.iter().enumerate() {
                out[i] = a[k].clone();
            }
            Some(Some(out))
        }
        Search::Exhausted => Some(None),
        Search::OutOfBudget => None,
    }
}

enum Search {
    Found(Vec<usize>, Vec<BigRational>),
    Exhausted,
    OutOfBudget,
}

fn subsets(
    items: &[usize],
    start: usize,
    max: usize,
    chosen: &mut Vec<usize>,
    budget: &mut usize,
    test: &mut dyn FnMut(&[usize]) -> Option<Vec<BigRational>>,
) -> Search {
    if !chosen.is_empty() {
        if *budget == 0 {
            return Search::OutOfBudget;
        }
        *budget -= 1;
        if let Some(a) = test(chosen) {
            return Search::Found(chosen.clone(), a);
        }
    }
    if chosen.len() == max {
        return Search::Exhausted;
    }
    for k in start..items.len() {
        chosen.push(items[k]);
        let r = subsets(items, k + 1, max, chosen, budget, test);
        chosen.pop();
        if !matches!(r, Search::Exhausted) {
            return r;
        }
    }
    Search::Exhausted
}

/// Unique solution of `Σ a_k cols_k = target` when the columns are linearly
/// independent; `None` if they are dependent or the system is inconsistent.
fn solve_independent(cols: &[&[BigRational]], target: &[BigRational]) -> Option<Vec<BigRational>> {
    let k = cols.len();
    let n = target.len();
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let mut row = 0;
    for col in 0..k {
        let p = (row..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(row, p);
        let inv = m[row][col].recip();
        for c in col..=k {
            m[row][c] = &m[row][c] * &inv;
        }
        for i in 0..n {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for c in col..=k {
                    let v = &m[row][c] * &f;
                    m[i][c] -= v;
                }
            }
        }
        row += 1;
    }
    if m[row..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    Some((0..k).map(|i| m[i][k].clone()).collect())
}

/// Integer functional on the free coordinates vanishing on `units` and
/// positive on every element of `others`.
fn positivity_certificate(rank: usize, units: &[Vec<BigInt>], others: &[Vec<BigInt>]) -> Option<Vec<BigInt>> {
    let unit_rows: Vec<Vec<BigInt>> = units.iter().map(|u| u[..rank].to_vec()).collect();
    let basis = left_kernel(&IntMatrix::from_rows(unit_rows, rank).transpose());
    let bt = basis.transpose();
    let projected: Vec<Vec<BigInt>> = others.iter().map(|g| bt.apply(&g[..rank])).collect();
    let dot = |a: &[BigInt], b: &[BigInt]| -> BigInt { a.iter().zip(b).map(|(x, y)| x * y).sum() };

    let mut mu = vec![BigInt::zero(); basis.rows()];
    for w in &projected {
        for (m, c) in mu.iter_mut().zip(w) {
            *m += c;
        }
    }
    let mut steps = 0;
    while let Some(w) = projected.iter().find(|w| !dot(&mu, w).is_positive()) {
        if steps == PERCEPTRON_BUDGET {
            return None;
        }
        steps += 1;
        for (m, c) in mu.iter_mut().zip(w) {
            *m += c;
        }
    }
    let lambda = basis.apply(&mu);
    let g = lambda.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    Some(if g > BigInt::one() {
        lambda.iter().map(|c| c / &g).collect()
    } else {
        lambda
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&c| BigInt::from(c)).collect()
    }

    fn z_monoid(gens: &[i64]) -> AffineMonoid {
        AffineMonoid::new(FgAbelianGroup::free(1), gens.iter().map(|&g| v(&[g])).collect(), DEFAULT_BOUND).unwrap()
    }

    fn check_witness(m: &AffineMonoid, x: &[BigInt], t: &[BigInt]) {
        assert!(t.iter().all(|c| !c.is_negative()));
        let mut s = m.ambient().zero();
        for (c, g) in t.iter().zip(m.generators()) {
            s = m.ambient().add(&s, &m.ambient().scale(c, g));
        }
        assert_eq!(s, m.ambient().normalize(x));
    }

    #[test]
    fn two_and_three() {
        let m = z_monoid(&[2, 3]);
        let r = m.member(&v(&[7]), DEFAULT_BOUND);
        assert_eq!(r.value, Tri::Yes);
        check_witness(&m, &v(&[7]), r.coefficients.as_ref().unwrap());
        assert_eq!(m.contains(&v(&[1])), Tri::No);
        assert_eq!(m.contains(&v(&[-2])), Tri::No);
        assert_eq!(m.contains(&v(&[0])), Tri::Yes);
    }

    #[test]
    fn mixed_signs_make_a_group() {
        let m = z_monoid(&[2, -3]);
        assert_eq!(m.is_gregarious().0, Tri::Yes);
        let r = m.member(&v(&[1]), DEFAULT_BOUND);
        assert_eq!(r.value, Tri::Yes);
        check_witness(&m, &v(&[1]), r.coefficients.as_ref().unwrap());
    }

    #[test]
    fn half_plane_with_line() {
        let m = AffineMonoid::new(
            FgAbelianGroup::free(2),
            vec![v(&[1, 0]), v(&[-1, 0]), v(&[0, 1])],
            DEFAULT_BOUND,
        )
        .unwrap();
        assert_eq!(m.invertibility(), vec![Tri::Yes, Tri::Yes, Tri::No]);
        assert_eq!(m.contains(&v(&[-40, 3])), Tri::Yes);
        assert_eq!(m.contains(&v(&[5, -1])), Tri::No);
        let (g, w) = m.is_gregarious();
        assert_eq!(g, Tri::No);
        assert_eq!(w, Some(v(&[0, 1])));
    }

    #[test]
    fn torsion_generators_are_units() {
        let g = FgAbelianGroup::new(1, v(&[4])).unwrap();
        let m = AffineMonoid::new(g, vec![v(&[0, 1]), v(&[1, 2])], DEFAULT_BOUND).unwrap();
        assert_eq!(m.invertibility(), vec![Tri::Yes, Tri::No]);
        let r = m.member(&v(&[3, 1]), DEFAULT_BOUND);
        assert_eq!(r.value, Tri::Yes);
        check_witness(&m, &v(&[3, 1]), r.coefficients.as_ref().unwrap());
        assert_eq!(m.contains(&v(&[-1, 0])), Tri::No);
    }

    #[test]
    fn parity_constraint() {
        let g = FgAbelianGroup::new(1, v(&[2])).unwrap();
        let m = AffineMonoid::new(g, vec![v(&[1, 1])], DEFAULT_BOUND).unwrap();
        assert_eq!(m.contains(&v(&[2, 0])), Tri::Yes);
        assert_eq!(m.contains(&v(&[2, 1])), Tri::No);
    }

    #[test]
    fn completion_of_diagonal() {
        let m = AffineMonoid::new(FgAbelianGroup::free(2), vec![v(&[1, 1])], DEFAULT_BOUND).unwrap();
        let c = grothendieck_completion(&m);
        assert_eq!(c.subgroup.group, FgAbelianGroup::free(1));
        let one = c.subgroup.coordinates(&v(&[3, 3])).unwrap();
        assert_eq!(c.monoid.contains(&one), Tri::Yes);
        assert_eq!(c.monoid.contains(&c.subgroup.group.neg(&one)), Tri::No);
    }

    #[test]
    fn empty_monoid_is_trivial() {
        let m = AffineMonoid::new(FgAbelianGroup::free(2), vec![], DEFAULT_BOUND).unwrap();
        assert_eq!(m.contains(&v(&[0, 0])), Tri::Yes);
        assert_eq!(m.contains(&v(&[1, 0])), Tri::No);
    }
}
