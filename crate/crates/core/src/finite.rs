//! Exact backend for finite groups given by operation tables.
//!
//! Elements are dense indices `0..order` with the identity normalized to
//! index 0. Every submonoid of a finite group is a subgroup, so the closures
//! here double as subgroup closures.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};

/// Default cap on group order for subgroup enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGroupTable {
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    labels: Vec<String>,
}

impl FiniteGroupTable {
    /// Validates a row-major operation table and normalizes the identity to index 0.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self> {
        let labels = (0..rows.len()).map(|i| i.to_string()).collect();
        Self::from_table_labeled(rows, labels)
    }

    pub fn from_table_labeled(rows: Vec<Vec<usize>>, labels: Vec<String>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::validation("operation table is empty"));
        }
        if labels.len() != n {
            return Err(Error::validation("label count differs from table order"));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::validation_with(
                    "operation table is not square",
                    format!("row {i} has {} entries", row.len()),
                ));
            }
            if let Some(&bad) = row.iter().find(|&&e| e >= n) {
                return Err(Error::validation_with(
                    "table entry out of range",
                    format!("row {i} contains {bad}"),
                ));
            }
        }
        // Latin square
        for i in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for j in 0..n {
                if std::mem::replace(&mut seen_row[rows[i][j]], true) {
                    return Err(Error::validation_with(
                        "table is not a Latin square",
                        format!("row {i} repeats {}", rows[i][j]),
                    ));
                }
                if std::mem::replace(&mut seen_col[rows[j][i]], true) {
                    return Err(Error::validation_with(
                        "table is not a Latin square",
                        format!("column {i} repeats {}", rows[j][i]),
                    ));
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| rows[e][x] == x && rows[x][e] == x))
            .ok_or_else(|| Error::validation("table has no two-sided identity"))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if rows[rows[a][b]][c] != rows[a][rows[b][c]] {
                        return Err(Error::validation_with(
                            "operation is not associative",
                            format!("({a}, {b}, {c})"),
                        ));
                    }
                }
            }
        }
        // Relabel so the identity sits at index 0.
        let swap = |x: usize| {
            if x == identity {
                0
            } else if x == 0 {
                identity
            } else {
                x
            }
        };
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[swap(a) * n + swap(b)] = swap(rows[a][b]);
            }
        }
        let mut labels = labels;
        labels.swap(0, identity);
        Ok(Self::from_normalized(n, table, labels))
    }

    /// Table of a group known to satisfy the axioms, with the identity at index 0.
    pub(crate) fn from_group_rows(rows: &[Vec<usize>], labels: Vec<String>) -> Self {
        let n = rows.len();
        debug_assert!((0..n).all(|x| rows[0][x] == x && rows[x][0] == x));
        Self::from_normalized(n, rows.concat(), labels)
    }

    fn from_normalized(order: usize, table: Vec<usize>, labels: Vec<String>) -> Self {
        let mut inverse = vec![0; order];
        for a in 0..order {
            inverse[a] = (0..order).find(|&b| table[a * order + b] == 0).unwrap();
        }
        FiniteGroupTable {
            order,
            table,
            inverse,
            labels,
        }
    }

    pub fn trivial() -> Self {
        Self::from_normalized(1, vec![0], vec!["e".into()])
    }

    /// `Z/n` with elements `0..n` in their natural order.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        Self::from_normalized(n, table, (0..n).map(|i| i.to_string()).collect())
    }

    /// Direct product; the pair `(a, b)` has index `a + |A| * b`.
    pub fn direct_product(a: &Self, b: &Self) -> Self {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let (xa, xb) = (x % na, x / na);
                let (ya, yb) = (y % na, y / na);
                table[x * n + y] = a.op(xa, ya) + na * b.op(xb, yb);
            }
        }
        let labels = (0..n)
            .map(|x| format!("({},{})", a.labels[x % na], b.labels[x / na]))
            .collect();
        Self::from_normalized(n, table, labels)
    }

    /// The permutation group generated by `gens` (permutations of `0..degree`,
    /// composed as functions: `(p + q)(i) = p(q(i))`). Returns the table and the
    /// permutation represented by each index.
    pub fn from_permutations(gens: &[Vec<usize>]) -> Result<(Self, Vec<Vec<usize>>)> {
        let degree = gens.first().map_or(0, Vec::len);
        for g in gens {
            let mut sorted = g.clone();
            sorted.sort_unstable();
            if g.len() != degree || sorted != (0..degree).collect::<Vec<_>>() {
                return Err(Error::validation_with("not a permutation", format!("{g:?}")));
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut perms = vec![identity.clone()];
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let p: Vec<usize> = (0..degree).map(|k| perms[i][g[k]]).collect();
                if !index.contains_key(&p) {
                    index.insert(p.clone(), perms.len());
                    queue.push_back(perms.len());
                    perms.push(p);
                }
            }
        }
        let n = perms.len();
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let p: Vec<usize> = (0..degree).map(|k| perms[a][perms[b][k]]).collect();
                table[a * n + b] = index[&p];
            }
        }
        let labels = perms.iter().map(|p| cycle_notation(p)).collect();
        Ok((Self::from_normalized(n, table, labels), perms))
    }

    /// Symmetric group on `degree` points.
    pub fn symmetric(degree: usize) -> (Self, Vec<Vec<usize>>) {
        if degree < 2 {
            return (Self::trivial(), vec![(0..degree).collect()]);
        }
        let mut swap: Vec<usize> = (0..degree).collect();
        swap.swap(0, 1);
        let cycle: Vec<usize> = (0..degree).map(|i| (i + 1) % degree).collect();
        Self::from_permutations(&[swap, cycle]).expect("valid permutations")
    }

    /// Dihedral group of order `2n` acting on an `n`-gon.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 2);
        let rotation: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let reflection: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        Self::from_permutations(&[rotation, reflection]).expect("valid permutations").0
    }

    /// Quaternion group of order 8 (regular permutation representation).
    pub fn quaternion() -> Self {
        // elements 1,i,j,k,-1,-i,-j,-k indexed 0..8; left multiplication by i and j
        let mul = |a: usize, b: usize| -> usize {
            // units table for {1,i,j,k}
            const T: [[(usize, bool); 4]; 4] = [
                [(0, false), (1, false), (2, false), (3, false)],
                [(1, false), (0, true), (3, false), (2, true)],
                [(2, false), (3, true), (0, true), (1, false)],
                [(3, false), (2, false), (1, true), (0, true)],
            ];
            let (u, s) = T[a % 4][b % 4];
            let neg = s ^ (a >= 4) ^ (b >= 4);
            u + if neg { 4 } else { 0 }
        };
        let rows: Vec<Vec<usize>> = (0..8).map(|a| (0..8).map(|b| mul(a, b)).collect()).collect();
        let labels = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        Self::from_table_labeled(rows, labels).expect("quaternion table is a group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `a - b` in additive notation, i.e. `a + inv(b)`.
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.op(a, self.inv(b))
    }

    /// `g + x - g`.
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.op(self.op(g, x), self.inv(g))
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.op(a, b) == self.op(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.op(x, a);
            k += 1;
        }
        k
    }

    /// Least subset containing `s` and the identity that is closed under the
    /// operation. Sorted; always a subgroup.
    pub fn submonoid_closure(&self, s: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order];
        member[0] = true;
        let gens: Vec<usize> = {
            let set: BTreeSet<usize> = s.iter().copied().filter(|&g| g != 0).collect();
            set.into_iter().collect()
        };
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.op(x, g);
                if !member[y] {
                    member[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&x| member[x]).collect()
    }

    /// Least submonoid containing `m` and closed under conjugation by every element.
    pub fn conjugation_closure(&self, m: &[usize]) -> Vec<usize> {
        let mut current = self.submonoid_closure(m);
        loop {
            let mut extended: BTreeSet<usize> = current.iter().copied().collect();
            for g in 0..self.order {
                for &x in &current {
                    extended.insert(self.conjugate(g, x));
                }
            }
            if extended.len() == current.len() {
                return current;
            }
            let gens: Vec<usize> = extended.into_iter().collect();
            current = self.submonoid_closure(&gens);
        }
    }

    /// Checks that `s` contains the identity and is closed under the operation.
    /// On failure returns a witness pair (or `(x, x)` for a missing identity).
    pub fn check_submonoid(&self, s: &[usize]) -> std::result::Result<(), (usize, usize)> {
        let mask = self.mask(s);
        if !mask[0] {
            return Err((0, 0));
        }
        for &a in s {
            for &b in s {
                if !mask[self.op(a, b)] {
                    return Err((a, b));
                }
            }
        }
        Ok(())
    }

    /// `Ok` if `n` is a normal subgroup; otherwise a witness `(g, x)` with
    /// `g + x - g` outside `n`.
    pub fn check_normal(&self, n: &[usize]) -> std::result::Result<(), (usize, usize)> {
        self.check_submonoid(n)?;
        let mask = self.mask(n);
        for g in 0..self.order {
            for &x in n {
                if !mask[self.conjugate(g, x)] {
                    return Err((g, x));
                }
            }
        }
        Ok(())
    }

    /// Boolean membership mask of a subset.
    pub fn mask(&self, s: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.order];
        for &x in s {
            mask[x] = true;
        }
        mask
    }

    /// Quotient by a normal subgroup, with the projection as an index map.
    /// Cosets are numbered by their least representative, so `N` itself is 0.
    pub fn quotient(&self, n: &[usize]) -> Result<(FiniteGroupTable, Vec<usize>)> {
        if let Err((g, x)) = self.check_normal(n) {
            return Err(Error::validation_with(
                "subgroup is not normal",
                format!("{} + {} - {}", self.label(g), self.label(x), self.label(g)),
            ));
        }
        let mut coset = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if coset[g] == usize::MAX {
                let id = reps.len();
                reps.push(g);
                for &x in n {
                    coset[self.op(g, x)] = id;
                }
            }
        }
        let k = reps.len();
        let mut table = vec![0; k * k];
        for a in 0..k {
            for b in 0..k {
                table[a * k + b] = coset[self.op(reps[a], reps[b])];
            }
        }
        let labels = reps.iter().map(|&r| format!("[{}]", self.label(r))).collect();
        Ok((Self::from_normalized(k, table, labels), coset))
    }

    /// The subgroup on `s` as its own table (elements in increasing index
    /// order), plus the inclusion as an index map.
    pub fn subgroup_table(&self, s: &[usize]) -> Result<(FiniteGroupTable, Vec<usize>)> {
        let mut elems: Vec<usize> = s.to_vec();
        elems.sort_unstable();
        elems.dedup();
        if let Err((a, b)) = self.check_submonoid(&elems) {
            return Err(Error::validation_with(
                "subset is not a subgroup",
                format!("{} + {}", self.label(a), self.label(b)),
            ));
        }
        let k = elems.len();
        let mut pos = vec![usize::MAX; self.order];
        for (i, &e) in elems.iter().enumerate() {
            pos[e] = i;
        }
        let mut table = vec![0; k * k];
        for a in 0..k {
            for b in 0..k {
                table[a * k + b] = pos[self.op(elems[a], elems[b])];
            }
        }
        let labels = elems.iter().map(|&e| self.labels[e].clone()).collect();
        Ok((Self::from_normalized(k, table, labels), elems))
    }

    /// All submonoids (equivalently subgroups), by cyclic extension.
    /// Sorted by size, then lexicographically by element list.
    pub fn enumerate_submonoids(&self, cap: usize) -> Result<Vec<Vec<usize>>> {
        if self.order > cap {
            return Err(Error::Resource(format!(
                "group order {} exceeds enumeration cap {cap}",
                self.order
            )));
        }
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let trivial = vec![0];
        found.insert(trivial.clone());
        let mut queue = VecDeque::from([trivial]);
        while let Some(h) = queue.pop_front() {
            let mask = self.mask(&h);
            for g in 0..self.order {
                if mask[g] {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let k = self.submonoid_closure(&gens);
                if found.insert(k.clone()) {
                    queue.push_back(k);
                }
            }
        }
        let mut all: Vec<Vec<usize>> = found.into_iter().collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(all)
    }

    /// A generating set chosen greedily in index order.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0];
        for g in 1..self.order {
            if span.len() == self.order {
                break;
            }
            if span.binary_search(&g).is_err() {
                gens.push(g);
                span = self.submonoid_closure(&gens);
            }
        }
        gens
    }

    /// `Ok` if `map` is a homomorphism into `target`; otherwise a witness pair.
    pub fn check_homomorphism(
        &self,
        target: &FiniteGroupTable,
        map: &[usize],
    ) -> std::result::Result<(), (usize, usize)> {
        for a in 0..self.order {
            for b in 0..self.order {
                if map[self.op(a, b)] != target.op(map[a], map[b]) {
                    return Err((a, b));
                }
            }
        }
        Ok(())
    }

    /// Extends an assignment of images of `gens` to a homomorphism, if one exists.
    pub fn extend_homomorphism(
        &self,
        gens: &[usize],
        images: &[usize],
        target: &FiniteGroupTable,
    ) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.order];
        map[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for (&g, &img) in gens.iter().zip(images) {
                let b = self.op(a, g);
                let fb = target.op(map[a], img);
                if map[b] == usize::MAX {
                    map[b] = fb;
                    queue.push_back(b);
                } else if map[b] != fb {
                    return None;
                }
            }
        }
        if map.contains(&usize::MAX) {
            return None;
        }
        Some(map)
    }

    /// Every homomorphism into `target`, by brute force over generator images.
    pub fn homomorphisms_to(&self, target: &FiniteGroupTable) -> Vec<Vec<usize>> {
        let gens = self.generating_set();
        let mut result = Vec::new();
        let mut images = vec![0usize; gens.len()];
        loop {
            if let Some(map) = self.extend_homomorphism(&gens, &images, target) {
                result.push(map);
            }
            // odometer
            let mut i = 0;
            loop {
                if i == images.len() {
                    return result;
                }
                images[i] += 1;
                if images[i] < target.order {
                    break;
                }
                images[i] = 0;
                i += 1;
            }
        }
    }

    /// Every automorphism, as index permutations.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        self.homomorphisms_to(self)
            .into_iter()
            .filter(|m| {
                let mut seen = vec![false; self.order];
                m.iter().all(|&x| !std::mem::replace(&mut seen[x], true))
            })
            .collect()
    }
}

/// Cycle notation with points numbered from 1, e.g. `(1 2)`; `()` for the identity.
fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        let mut first = true;
        while !seen[i] {
            seen[i] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&(i + 1).to_string());
            first = false;
            i = p[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}
