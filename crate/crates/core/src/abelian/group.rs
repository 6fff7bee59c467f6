use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::IntMatrix;
use super::snf::{left_kernel, snf, solve_left, SmithForm};
use crate::error::{Error, Result};

/// `Z^rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k` in invariant-factor form.
///
/// Coordinates are laid out free part first, then torsion; torsion
/// coordinates are always stored reduced to `[0, d_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgAbelianGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        for (i, d) in torsion.iter().enumerate() {
            if *d < BigInt::from(2) {
                return Err(Error::validation_with(
                    "invariant factors must be at least 2",
                    format!("d_{} = {d}", i + 1),
                ));
            }
            if i > 0 && !d.is_multiple_of(&torsion[i - 1]) {
                return Err(Error::validation_with(
                    "invariant factors must form a divisibility chain",
                    format!("d_{} = {} does not divide d_{} = {d}", i, torsion[i - 1], i + 1),
                ));
            }
        }
        Ok(FgAbelianGroup { rank, torsion })
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    /// `Z/n` for `n >= 2`, `Z` for `n = 0`, trivial for `n = 1`.
    pub fn cyclic(n: u64) -> Self {
        match n {
            0 => Self::free(1),
            1 => Self::trivial(),
            n => FgAbelianGroup {
                rank: 0,
                torsion: vec![BigInt::from(n)],
            },
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn dim(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.torsion.iter().fold(BigInt::one(), |acc, d| acc * d))
    }

    /// Modulus of coordinate `i` (zero for free coordinates).
    pub fn modulus(&self, i: usize) -> BigInt {
        if i < self.rank {
            BigInt::zero()
        } else {
            self.torsion[i - self.rank].clone()
        }
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.dim()]
    }

    pub fn normalize(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.dim(), "coordinate vector has wrong length");
        x.iter()
            .enumerate()
            .map(|(i, c)| {
                if i < self.rank {
                    c.clone()
                } else {
                    c.mod_floor(&self.torsion[i - self.rank])
                }
            })
            .collect()
    }

    pub fn is_normalized(&self, x: &[BigInt]) -> bool {
        x.len() == self.dim()
            && x.iter().enumerate().skip(self.rank).all(|(i, c)| {
                !c.is_negative() && *c < self.torsion[i - self.rank]
            })
    }

    pub fn add(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        self.normalize(&s)
    }

    pub fn neg(&self, x: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = x.iter().map(|a| -a).collect();
        self.normalize(&s)
    }

    pub fn sub(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.normalize(&s)
    }

    pub fn scale(&self, k: &BigInt, x: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = x.iter().map(|a| a * k).collect();
        self.normalize(&s)
    }

    /// The `i`-th canonical generator.
    pub fn unit(&self, i: usize) -> Vec<BigInt> {
        let mut e = self.zero();
        e[i] = BigInt::one();
        e
    }

    /// Rows `d_i * e_{rank+i}`: the relations of the torsion coordinates.
    pub fn relation_matrix(&self) -> IntMatrix {
        let mut r = IntMatrix::zeros(self.torsion.len(), self.dim());
        for (i, d) in self.torsion.iter().enumerate() {
            r[(i, self.rank + i)] = d.clone();
        }
        r
    }

    /// All elements when the group is finite and has at most `limit` elements.
    pub fn elements(&self, limit: usize) -> Option<Vec<Vec<BigInt>>> {
        let order = self.order()?.to_usize()?;
        if order > limit {
            return None;
        }
        let mut out = Vec::with_capacity(order);
        let mut cur = self.zero();
        for _ in 0..order {
            out.push(cur.clone());
            for i in 0..self.torsion.len() {
                cur[i] += 1;
                if cur[i] < self.torsion[i] {
                    break;
                }
                cur[i] = BigInt::zero();
            }
        }
        Some(out)
    }

    /// Checks that `m` (rows = images of this group's generators in `target`
    /// coordinates) respects the torsion relations.
    pub fn check_hom_matrix(&self, target: &FgAbelianGroup, m: &IntMatrix) -> Result<()> {
        if m.rows() != self.dim() || m.cols() != target.dim() {
            return Err(Error::validation_with(
                "homomorphism matrix has wrong shape",
                format!(
                    "{}x{} for {} -> {}",
                    m.rows(),
                    m.cols(),
                    self,
                    target
                ),
            ));
        }
        for (i, d) in self.torsion.iter().enumerate() {
            let img = target.scale(d, m.row(self.rank + i));
            if img.iter().any(|c| !c.is_zero()) {
                return Err(Error::validation_with(
                    "matrix does not respect a torsion relation",
                    format!("{d} * e_{} does not map to 0", self.rank + i + 1),
                ));
            }
        }
        Ok(())
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// `Z^n / (row lattice of the relations)` in invariant-factor form, together
/// with the coordinate change in both directions.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub group: FgAbelianGroup,
    /// `n x k`: presentation coordinates to canonical coordinates (then normalize).
    pub to_canonical: IntMatrix,
    /// `k x n`: lifts canonical coordinates back to presentation coordinates.
    pub from_canonical: IntMatrix,
}

impl Presentation {
    pub fn canonical(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.group.normalize(&self.to_canonical.apply(x))
    }

    pub fn lift(&self, y: &[BigInt]) -> Vec<BigInt> {
        self.from_canonical.apply(y)
    }
}

/// Invariant-factor decomposition of `Z^n / rowspace(relations)`.
pub fn presented_group(n: usize, relations: &IntMatrix) -> Presentation {
    assert_eq!(relations.cols(), n, "relations must have one column per generator");
    let form = snf(relations);
    let diag = form.diagonal();
    let free: Vec<usize> = (form.rank..n).collect();
    let torsion_idx: Vec<usize> = (0..form.rank).filter(|&i| diag[i] > BigInt::one()).collect();
    let mut idx = free.clone();
    idx.extend(&torsion_idx);
    let group = FgAbelianGroup {
        rank: free.len(),
        torsion: torsion_idx.iter().map(|&i| diag[i].clone()).collect(),
    };
    Presentation {
        group,
        to_canonical: form.v.select_cols(&idx),
        from_canonical: form.v_inv.select_rows(&idx),
    }
}

/// A subgroup of an f.g. abelian group, presented in its own canonical coordinates.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub ambient: FgAbelianGroup,
    pub group: FgAbelianGroup,
    /// `k x n`: images of the subgroup's canonical generators in the ambient.
    pub inclusion: IntMatrix,
    generators: IntMatrix,
    presentation: Presentation,
    solver: SmithForm,
}

/// Subgroup generated by `gens` (ambient coordinates).
pub fn subgroup(ambient: &FgAbelianGroup, gens: &[Vec<BigInt>]) -> Subgroup {
    let n = ambient.dim();
    let g = IntMatrix::from_rows(gens.iter().map(|x| ambient.normalize(x)).collect(), n);
    let stacked = g.vstack(&ambient.relation_matrix());
    let kernel = left_kernel(&stacked);
    let k = gens.len();
    let relations = kernel.select_cols(&(0..k).collect::<Vec<_>>());
    let presentation = presented_group(k, &relations);
    let raw = presentation.from_canonical.mul(&g);
    let inclusion = IntMatrix::from_rows(
        (0..raw.rows()).map(|i| ambient.normalize(raw.row(i))).collect(),
        n,
    );
    Subgroup {
        ambient: ambient.clone(),
        group: presentation.group.clone(),
        inclusion,
        solver: snf(&stacked),
        generators: g,
        presentation,
    }
}

impl Subgroup {
    /// Canonical subgroup coordinates of an ambient element, if it lies in the subgroup.
    pub fn coordinates(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let c = solve_left(&self.solver, &self.ambient.normalize(x))?;
        let k = self.generators.rows();
        Some(self.presentation.canonical(&c[..k]))
    }

    /// Coefficients `c` with `sum c_i g_i = x` over the generating list, if any.
    pub fn generator_coefficients(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let c = solve_left(&self.solver, &self.ambient.normalize(x))?;
        Some(c[..self.generators.rows()].to_vec())
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        solve_left(&self.solver, &self.ambient.normalize(x)).is_some()
    }

    /// Maps subgroup coordinates to the ambient.
    pub fn include(&self, y: &[BigInt]) -> Vec<BigInt> {
        self.ambient.normalize(&self.inclusion.apply(y))
    }

    pub fn is_trivial(&self) -> bool {
        self.group.is_trivial()
    }

    pub fn is_whole(&self) -> bool {
        (0..self.ambient.dim()).all(|i| self.contains(&self.ambient.unit(i)))
    }

    /// First canonical generator of the ambient outside the subgroup.
    pub fn missing_generator(&self) -> Option<Vec<BigInt>> {
        (0..self.ambient.dim())
            .map(|i| self.ambient.unit(i))
            .find(|e| !self.contains(e))
    }
}

/// A homomorphism between f.g. abelian groups given by its matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianHom {
    pub source: FgAbelianGroup,
    pub target: FgAbelianGroup,
    pub matrix: IntMatrix,
}

impl AbelianHom {
    pub fn new(source: FgAbelianGroup, target: FgAbelianGroup, matrix: IntMatrix) -> Result<Self> {
        source.check_hom_matrix(&target, &matrix)?;
        let matrix = IntMatrix::from_rows(
            (0..matrix.rows()).map(|i| target.normalize(matrix.row(i))).collect(),
            target.dim(),
        );
        Ok(AbelianHom {
            source,
            target,
            matrix,
        })
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.target.normalize(&self.matrix.apply(x))
    }

    /// Images of the source's canonical generators.
    pub fn generator_images(&self) -> Vec<Vec<BigInt>> {
        self.matrix.to_rows()
    }

    fn stacked(&self) -> IntMatrix {
        self.matrix.vstack(&self.target.relation_matrix())
    }

    pub fn kernel(&self) -> Subgroup {
        let kernel = left_kernel(&self.stacked());
        let n = self.source.dim();
        let gens: Vec<Vec<BigInt>> = (0..kernel.rows())
            .map(|i| self.source.normalize(&kernel.row(i)[..n]))
            .filter(|v| v.iter().any(|c| !c.is_zero()))
            .collect();
        subgroup(&self.source, &gens)
    }

    pub fn image(&self) -> Subgroup {
        subgroup(&self.target, &self.generator_images())
    }

    /// Some preimage of `y`, if `y` lies in the image.
    pub fn preimage(&self, y: &[BigInt]) -> Option<Vec<BigInt>> {
        let form = snf(&self.stacked());
        let c = solve_left(&form, &self.target.normalize(y))?;
        Some(self.source.normalize(&c[..self.source.dim()]))
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.image().is_whole()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &AbelianHom) -> AbelianHom {
        assert_eq!(self.target, next.source);
        let m = self.matrix.mul(&next.matrix);
        AbelianHom::new(self.source.clone(), next.target.clone(), m).expect("composite is well defined")
    }

    /// Inverse of a bijective homomorphism.
    pub fn inverse(&self) -> Option<AbelianHom> {
        if !self.is_injective() {
            return None;
        }
        let rows: Option<Vec<Vec<BigInt>>> = (0..self.target.dim())
            .map(|i| self.preimage(&self.target.unit(i)))
            .collect();
        let m = IntMatrix::from_rows(rows?, self.source.dim());
        AbelianHom::new(self.target.clone(), self.source.clone(), m).ok()
    }
}

/// Quotient of `g` by the subgroup generated by `gens`, with the projection.
pub fn quotient(g: &FgAbelianGroup, gens: &[Vec<BigInt>]) -> (Presentation, AbelianHom) {
    let n = g.dim();
    let extra = IntMatrix::from_rows(gens.iter().map(|x| g.normalize(x)).collect(), n);
    let rel = g.relation_matrix().vstack(&extra);
    let p = presented_group(n, &rel);
    let proj = AbelianHom::new(g.clone(), p.group.clone(), p.to_canonical.clone())
        .expect("projection respects relations");
    (p, proj)
}

/// Direct sum `a ⊕ b` with injections and projections.
///
/// Free coordinates are concatenated unchanged (those of `a` first); the
/// torsion parts are merged into invariant-factor form.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub group: FgAbelianGroup,
    pub inject: [AbelianHom; 2],
    pub project: [AbelianHom; 2],
}

pub fn direct_sum(a: &FgAbelianGroup, b: &FgAbelianGroup) -> DirectSum {
    let (ta, tb) = (a.torsion.len(), b.torsion.len());
    let mut all_t = a.torsion.clone();
    all_t.extend(b.torsion.iter().cloned());
    let tors = presented_group(ta + tb, &IntMatrix::diagonal(&all_t));
    debug_assert_eq!(tors.group.rank, 0);
    let rank = a.rank + b.rank;
    let group = FgAbelianGroup {
        rank,
        torsion: tors.group.torsion.clone(),
    };
    let k = tors.group.torsion.len();
    let dim = group.dim();

    let inject_for = |src: &FgAbelianGroup, free_offset: usize, tors_offset: usize| {
        let mut m = IntMatrix::zeros(src.dim(), dim);
        for i in 0..src.rank {
            m[(i, free_offset + i)] = BigInt::one();
        }
        for i in 0..src.torsion.len() {
            for j in 0..k {
                m[(src.rank + i, rank + j)] = tors.to_canonical[(tors_offset + i, j)].clone();
            }
        }
        AbelianHom::new(src.clone(), group.clone(), m).expect("injection is well defined")
    };
    let project_for = |dst: &FgAbelianGroup, free_offset: usize, tors_offset: usize| {
        let mut m = IntMatrix::zeros(dim, dst.dim());
        for i in 0..dst.rank {
            m[(free_offset + i, i)] = BigInt::one();
        }
        for j in 0..k {
            for i in 0..dst.torsion.len() {
                m[(rank + j, dst.rank + i)] = tors.from_canonical[(j, tors_offset + i)].clone();
            }
        }
        AbelianHom::new(group.clone(), dst.clone(), m).expect("projection is well defined")
    };
    DirectSum {
        inject: [inject_for(a, 0, 0), inject_for(b, a.rank, ta)],
        project: [project_for(a, 0, 0), project_for(b, a.rank, ta)],
        group,
    }
}
