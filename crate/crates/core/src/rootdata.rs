//! Based root data, Weyl groups, pinned (diagram) automorphisms, folding to
//! the fixed group, orbit classification of roots under an automorphism, and
//! the search for a real root trivializing a product of order-two torus
//! elements.
//!
//! Conventions. Roots live in `X^*`, coroots in `X_*`, and the two lattices
//! are written in dual bases so that the pairing is the dot product. For the
//! simply connected constructors the basis of `X^*` is the fundamental
//! weights and the basis of `X_*` is the simple coroots; a simple root then
//! has the corresponding Cartan-matrix column as its coordinate vector.

use crate::exactnum::Rat;
use crate::linalg::*;
use crate::{Error, Result};
use num_traits::Zero;
use std::collections::{HashMap, HashSet, VecDeque};

/// A root together with its coroot and its expansion in the simple roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    /// Coordinates in `X^*`.
    pub vec: IVec,
    /// Coordinates of the coroot in `X_*`.
    pub coroot: IVec,
    /// Integer coefficients with respect to the simple roots.
    pub expansion: IVec,
    /// Sum of the expansion coefficients.
    pub height: i64,
}

impl Root {
    pub fn is_positive(&self) -> bool {
        self.height > 0
    }
}

/// A based root datum on a pair of dual lattices.
#[derive(Clone, Debug)]
pub struct BasedRootDatum {
    dim: usize,
    simple_roots: Vec<IVec>,
    simple_coroots: Vec<IVec>,
    roots: Vec<Root>,
    index: HashMap<IVec, usize>,
}

impl BasedRootDatum {
    /// Build a datum from explicit simple roots and coroots (dual-basis
    /// coordinates, pairing = dot).
    pub fn new(simple_roots: Vec<IVec>, simple_coroots: Vec<IVec>) -> Result<Self> {
        let n = simple_roots.len();
        if n == 0 || simple_coroots.len() != n {
            return Err(Error::InvalidDatum("need matching nonempty simple roots/coroots".into()));
        }
        let dim = simple_roots[0].len();
        if simple_roots.iter().any(|r| r.len() != dim)
            || simple_coroots.iter().any(|r| r.len() != dim)
        {
            return Err(Error::InvalidDatum("inconsistent coordinate lengths".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let c = dot_ii(&simple_roots[j], &simple_coroots[i]);
                if i == j && c != 2 {
                    return Err(Error::InvalidDatum(format!(
                        "⟨α_{j}, α_{i}^∨⟩ = {c}, expected 2 on the diagonal"
                    )));
                }
                if i != j && c > 0 {
                    return Err(Error::InvalidDatum(format!(
                        "⟨α_{j}, α_{i}^∨⟩ = {c} > 0 off the diagonal"
                    )));
                }
            }
        }
        let mut datum = BasedRootDatum {
            dim,
            simple_roots,
            simple_coroots,
            roots: Vec::new(),
            index: HashMap::new(),
        };
        datum.generate_roots()?;
        Ok(datum)
    }

    /// The simply connected datum of an irreducible type, in the fundamental
    /// weight basis. Supported types: `"A" | "B" | "C" | "D"`.
    pub fn simply_connected(kind: &str, rank: usize) -> Result<Self> {
        let c = cartan_matrix(kind, rank)?;
        // α_j has coordinates = column j of the Cartan matrix; α_j^∨ = e_j.
        let simple_roots: Vec<IVec> =
            (0..rank).map(|j| (0..rank).map(|i| c[i][j]).collect()).collect();
        let simple_coroots = identity(rank);
        Self::new(simple_roots, simple_coroots)
    }

    /// Direct product of data (block-diagonal lattices).
    pub fn product(parts: &[BasedRootDatum]) -> Result<Self> {
        let dim: usize = parts.iter().map(|p| p.dim).sum();
        let mut simple_roots = Vec::new();
        let mut simple_coroots = Vec::new();
        let mut offset = 0;
        for p in parts {
            for r in &p.simple_roots {
                let mut v = vec![0; dim];
                v[offset..offset + p.dim].copy_from_slice(r);
                simple_roots.push(v);
            }
            for r in &p.simple_coroots {
                let mut v = vec![0; dim];
                v[offset..offset + p.dim].copy_from_slice(r);
                simple_coroots.push(v);
            }
            offset += p.dim;
        }
        Self::new(simple_roots, simple_coroots)
    }

    fn generate_roots(&mut self) -> Result<()> {
        let n = self.rank();
        let mut seen: HashMap<IVec, (IVec, IVec)> = HashMap::new(); // vec -> (coroot, expansion)
        let mut queue: VecDeque<(IVec, IVec, IVec)> = VecDeque::new();
        for i in 0..n {
            let mut exp = vec![0i64; n];
            exp[i] = 1;
            queue.push_back((self.simple_roots[i].clone(), self.simple_coroots[i].clone(), exp));
        }
        while let Some((v, cv, exp)) = queue.pop_front() {
            if seen.contains_key(&v) {
                continue;
            }
            seen.insert(v.clone(), (cv.clone(), exp.clone()));
            if seen.len() > 4096 {
                return Err(Error::InvalidDatum("root generation does not terminate".into()));
            }
            for i in 0..n {
                let k = dot_ii(&v, &self.simple_coroots[i]);
                let rv = sub_vec(&v, &scale_vec(k, &self.simple_roots[i]));
                let kc = dot_ii(&self.simple_roots[i], &cv);
                let rcv = sub_vec(&cv, &scale_vec(kc, &self.simple_coroots[i]));
                let mut rexp = exp.clone();
                rexp[i] -= k;
                queue.push_back((rv, rcv, rexp));
            }
        }
        let mut roots: Vec<Root> = seen
            .into_iter()
            .map(|(vec, (coroot, expansion))| {
                let height = expansion.iter().sum();
                Root { vec, coroot, expansion, height }
            })
            .collect();
        roots.sort_by(|a, b| a.vec.cmp(&b.vec));
        if roots.iter().any(|r| r.height == 0) {
            return Err(Error::InvalidDatum("degenerate root of height zero".into()));
        }
        self.index = roots.iter().enumerate().map(|(i, r)| (r.vec.clone(), i)).collect();
        self.roots = roots;
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn simple_roots(&self) -> &[IVec] {
        &self.simple_roots
    }

    pub fn simple_coroots(&self) -> &[IVec] {
        &self.simple_coroots
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root_index(&self, v: &IVec) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn is_root(&self, v: &IVec) -> bool {
        self.index.contains_key(v)
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.is_positive())
    }

    pub fn num_positive(&self) -> usize {
        self.positive_roots().count()
    }

    pub fn cartan(&self) -> IMat {
        let n = self.rank();
        (0..n)
            .map(|i| (0..n).map(|j| dot_ii(&self.simple_roots[j], &self.simple_coroots[i])).collect())
            .collect()
    }

    /// Half the sum of the positive roots, as an exact rational vector.
    pub fn rho(&self) -> QVec {
        let mut s = vec![Rat::zero(); self.dim];
        for r in self.positive_roots() {
            for (si, xi) in s.iter_mut().zip(&r.vec) {
                *si += Rat::from_integer(*xi);
            }
        }
        s.iter().map(|x| *x / Rat::from_integer(2)).collect()
    }

    /// Half the sum of the positive coroots.
    pub fn rho_check(&self) -> QVec {
        let mut s = vec![Rat::zero(); self.dim];
        for r in self.positive_roots() {
            for (si, xi) in s.iter_mut().zip(&r.coroot) {
                *si += Rat::from_integer(*xi);
            }
        }
        s.iter().map(|x| *x / Rat::from_integer(2)).collect()
    }

    /// Twice `rho_check`, an integral vector.
    pub fn two_rho_check(&self) -> IVec {
        let mut s = vec![0i64; self.dim];
        for r in self.positive_roots() {
            for (si, xi) in s.iter_mut().zip(&r.coroot) {
                *si += *xi;
            }
        }
        s
    }

    /// Canonical Weyl-invariant symmetric form on `X^* ⊗ Q`:
    /// `B(x,y) = Σ_r ⟨x, r^∨⟩⟨y, r^∨⟩` over all roots `r`.
    pub fn invariant_form(&self, x: &IVec, y: &IVec) -> i64 {
        self.roots
            .iter()
            .map(|r| dot_ii(x, &r.coroot) * dot_ii(y, &r.coroot))
            .sum()
    }

    /// Squared length of a root under the canonical form.
    pub fn length2(&self, root: &IVec) -> i64 {
        self.invariant_form(root, root)
    }

    /// Simple reflection matrices acting on `X^*` (columns convention:
    /// `x ↦ M·x`) and on `X_*`.
    fn reflection_pair(&self, root: &IVec, coroot: &IVec) -> (IMat, IMat) {
        let d = self.dim;
        let mut mstar = identity(d);
        let mut msub = identity(d);
        for j in 0..d {
            // s(e_j) = e_j − ⟨e_j, coroot⟩·root on X^*
            for i in 0..d {
                mstar[i][j] -= coroot[j] * root[i];
                msub[i][j] -= root[j] * coroot[i];
            }
        }
        (mstar, msub)
    }

    /// The full Weyl group, enumerated breadth-first from the simple
    /// reflections. Deterministic order: identity first, then by word length
    /// with lexicographic tie-break on the matrix.
    pub fn weyl_group(&self) -> Vec<WeylElement> {
        let gens: Vec<(IMat, IMat)> = (0..self.rank())
            .map(|i| self.reflection_pair(&self.simple_roots[i], &self.simple_coroots[i]))
            .collect();
        self.generate_group(&gens, true)
    }

    /// Subgroup generated by the reflections in the given roots.
    pub fn reflection_subgroup(&self, root_indices: &[usize]) -> Vec<WeylElement> {
        let gens: Vec<(IMat, IMat)> = root_indices
            .iter()
            .map(|&i| self.reflection_pair(&self.roots[i].vec, &self.roots[i].coroot))
            .collect();
        self.generate_group(&gens, false)
    }

    fn generate_group(&self, gens: &[(IMat, IMat)], with_words: bool) -> Vec<WeylElement> {
        let d = self.dim;
        let mut out: Vec<WeylElement> = Vec::new();
        let mut seen: HashSet<IMat> = HashSet::new();
        let mut queue: VecDeque<(IMat, IMat, Vec<usize>)> = VecDeque::new();
        queue.push_back((identity(d), identity(d), Vec::new()));
        while let Some((mstar, msub, word)) = queue.pop_front() {
            if !seen.insert(mstar.clone()) {
                continue;
            }
            assert!(seen.len() <= 1200, "Weyl enumeration exceeds the catalog bound");
            for (gi, (gstar, gsub)) in gens.iter().enumerate() {
                let nstar = mat_mul(&mstar, gstar);
                let nsub = mat_mul(&msub, gsub);
                let mut nword = word.clone();
                if with_words {
                    nword.push(gi);
                }
                queue.push_back((nstar, nsub, nword));
            }
            let length = self.length_of(&mstar);
            out.push(WeylElement { mstar, msub, word, length });
        }
        out.sort_by(|a, b| (a.length, &a.mstar).cmp(&(b.length, &b.mstar)));
        out
    }

    fn length_of(&self, mstar: &IMat) -> usize {
        self.positive_roots()
            .filter(|r| {
                let img = mat_vec(mstar, &r.vec);
                let idx = self.root_index(&img).expect("Weyl image must be a root");
                !self.roots[idx].is_positive()
            })
            .count()
    }

    /// The longest element of the Weyl group.
    pub fn longest_element(&self) -> WeylElement {
        self.weyl_group().into_iter().max_by_key(|w| w.length).unwrap()
    }

    /// Serialize in the text interchange format.
    pub fn to_text(&self, auto: Option<&PinnedAutomorphism>) -> String {
        let mut s = format!("rank {}\n", self.rank());
        for r in &self.simple_roots {
            s.push_str(&r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
            s.push('\n');
        }
        for r in &self.simple_coroots {
            s.push_str(&r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
            s.push('\n');
        }
        if let Some(a) = auto {
            s.push_str("perm ");
            s.push_str(
                &a.simple_permutation
                    .iter()
                    .map(|x| (x + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
            );
            s.push('\n');
        }
        s
    }

    /// Parse the text interchange format: `rank n`, n simple-root lines,
    /// n simple-coroot lines, optional `perm i1 ... in` line (1-based).
    pub fn from_text(text: &str) -> Result<(Self, Option<PinnedAutomorphism>)> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let parse_err = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
        let Some(&(l0, first)) = lines.first() else {
            return Err(parse_err(1, "empty input"));
        };
        let mut it = first.split_whitespace();
        if it.next() != Some("rank") {
            return Err(parse_err(l0, "expected 'rank n'"));
        }
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err(l0, "expected 'rank n' with integral n"))?;
        if lines.len() < 1 + 2 * n {
            let line = lines.last().map(|&(l, _)| l).unwrap_or(l0);
            return Err(parse_err(line, "not enough rows for the declared rank"));
        }
        let read_vec = |line: usize, s: &str| -> Result<IVec> {
            s.split_whitespace()
                .map(|t| t.parse::<i64>().map_err(|_| parse_err(line, "expected an integer")))
                .collect()
        };
        let mut simple_roots = Vec::with_capacity(n);
        let mut simple_coroots = Vec::with_capacity(n);
        for k in 0..n {
            let (line, s) = lines[1 + k];
            simple_roots.push(read_vec(line, s)?);
        }
        for k in 0..n {
            let (line, s) = lines[1 + n + k];
            simple_coroots.push(read_vec(line, s)?);
        }
        let datum = Self::new(simple_roots, simple_coroots)?;
        let auto = if lines.len() > 1 + 2 * n {
            let (line, s) = lines[1 + 2 * n];
            let mut toks = s.split_whitespace();
            if toks.next() != Some("perm") {
                return Err(parse_err(line, "expected 'perm i1 ... in'"));
            }
            let perm1: Vec<usize> = toks
                .map(|t| t.parse::<usize>().map_err(|_| parse_err(line, "expected an index")))
                .collect::<Result<_>>()?;
            if perm1.len() != n || perm1.iter().any(|&i| i == 0 || i > n) {
                return Err(parse_err(line, "permutation must list each simple index once, 1-based"));
            }
            let perm: Vec<usize> = perm1.iter().map(|&i| i - 1).collect();
            Some(PinnedAutomorphism::from_simple_permutation(&datum, perm)?)
        } else {
            None
        };
        Ok((datum, auto))
    }
}

fn cartan_matrix(kind: &str, rank: usize) -> Result<IMat> {
    if rank == 0 {
        return Err(Error::InvalidDatum("rank must be positive".into()));
    }
    let n = rank;
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut chain = |i: usize, j: usize| {
        c[i][j] = -1;
        c[j][i] = -1;
    };
    match kind {
        "A" => {
            for i in 0..n - 1 {
                chain(i, i + 1);
            }
        }
        "B" => {
            if n < 2 {
                return Err(Error::InvalidDatum("B requires rank ≥ 2".into()));
            }
            for i in 0..n - 1 {
                chain(i, i + 1);
            }
            // α_{n-1} long, α_n short: ⟨α_{n-1}, α_n^∨⟩ = −2
            c[n - 1][n - 2] = -2;
        }
        "C" => {
            if n < 2 {
                return Err(Error::InvalidDatum("C requires rank ≥ 2".into()));
            }
            for i in 0..n - 1 {
                chain(i, i + 1);
            }
            // α_{n-1} short, α_n long: ⟨α_n, α_{n-1}^∨⟩ = −2
            c[n - 2][n - 1] = -2;
        }
        "D" => {
            if n < 3 {
                return Err(Error::InvalidDatum("D requires rank ≥ 3".into()));
            }
            for i in 0..n - 2 {
                chain(i, i + 1);
            }
            chain(n - 3, n - 1);
        }
        other => {
            return Err(Error::InvalidDatum(format!("unsupported type {other}")));
        }
    }
    Ok(c)
}

/// An element of the Weyl group, acting on both lattices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    /// Action on `X^*`: `x ↦ mstar · x`.
    pub mstar: IMat,
    /// Action on `X_*`: `y ↦ msub · y`.
    pub msub: IMat,
    /// A word in the simple reflections (empty for subgroup enumerations).
    pub word: Vec<usize>,
    /// Number of positive roots sent negative.
    pub length: usize,
}

impl WeylElement {
    pub fn identity(dim: usize) -> Self {
        WeylElement { mstar: identity(dim), msub: identity(dim), word: Vec::new(), length: 0 }
    }

    pub fn is_identity(&self) -> bool {
        self.mstar == identity(self.mstar.len())
    }

    pub fn sign(&self) -> i64 {
        if self.length % 2 == 0 { 1 } else { -1 }
    }

    pub fn apply_star(&self, x: &IVec) -> IVec {
        mat_vec(&self.mstar, x)
    }

    pub fn apply_star_q(&self, x: &QVec) -> QVec {
        mat_vec_q(&self.mstar, x)
    }

    pub fn apply_sub(&self, y: &IVec) -> IVec {
        mat_vec(&self.msub, y)
    }

    pub fn apply_sub_q(&self, y: &QVec) -> QVec {
        mat_vec_q(&self.msub, y)
    }

    /// Inverse element (the transpose matrices, since the actions are dual).
    pub fn inverse(&self) -> WeylElement {
        WeylElement {
            mstar: transpose(&self.msub),
            msub: transpose(&self.mstar),
            word: self.word.iter().rev().copied().collect(),
            length: self.length,
        }
    }

    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        WeylElement {
            mstar: mat_mul(&self.mstar, &other.mstar),
            msub: mat_mul(&self.msub, &other.msub),
            word: self.word.iter().chain(&other.word).copied().collect(),
            length: 0, // caller-facing length is recomputed where needed
        }
    }

    /// Determinant of the `X^*`-action (±1 for Weyl elements).
    pub fn det(&self) -> i64 {
        det_small(&self.mstar)
    }
}

fn det_small(m: &IMat) -> i64 {
    // fraction-free Gaussian elimination (Bareiss) on a copy
    let n = m.len();
    let mut a: Vec<Vec<i128>> =
        m.iter().map(|row| row.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else { return 0 };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

/// A finite-order lattice automorphism permuting the simple roots and
/// preserving the based structure (a Dynkin diagram symmetry).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PinnedAutomorphism {
    pub simple_permutation: Vec<usize>,
    /// Action on `X^*`.
    pub mstar: IMat,
    /// Action on `X_*`.
    pub msub: IMat,
    pub order: usize,
}

impl PinnedAutomorphism {
    pub fn identity(datum: &BasedRootDatum) -> Self {
        PinnedAutomorphism {
            simple_permutation: (0..datum.rank()).collect(),
            mstar: identity(datum.dim()),
            msub: identity(datum.dim()),
            order: 1,
        }
    }

    /// Construct from a permutation of the simple indices. The permutation
    /// must preserve the Cartan matrix; the lattice action is determined by
    /// permuting the simple roots when those span, which holds for every
    /// datum this crate constructs.
    pub fn from_simple_permutation(datum: &BasedRootDatum, perm: Vec<usize>) -> Result<Self> {
        let n = datum.rank();
        if perm.len() != n {
            return Err(Error::NotPinned("permutation length differs from rank".into()));
        }
        let c = datum.cartan();
        for i in 0..n {
            for j in 0..n {
                if c[perm[i]][perm[j]] != c[i][j] {
                    return Err(Error::NotPinned(format!(
                        "permutation does not preserve the Cartan matrix at ({i},{j})"
                    )));
                }
            }
        }
        if datum.dim() != n {
            return Err(Error::NotPinned("automorphisms need a full-rank based datum".into()));
        }
        // Solve M·α_j = α_{perm(j)} over the simple-root basis.
        let a_cols: IMat = transpose(&datum.simple_roots.to_vec()); // columns are simple roots
        let b_cols: IMat = {
            let permuted: Vec<IVec> = (0..n).map(|j| datum.simple_roots[perm[j]].clone()).collect();
            transpose(&permuted)
        };
        let mstar = solve_matrix(&a_cols, &b_cols).ok_or_else(|| {
            Error::NotPinned("no integral lattice action realizes the permutation".into())
        })?;
        let acheck_cols: IMat = transpose(&datum.simple_coroots.to_vec());
        let bcheck_cols: IMat = {
            let permuted: Vec<IVec> =
                (0..n).map(|j| datum.simple_coroots[perm[j]].clone()).collect();
            transpose(&permuted)
        };
        let msub = solve_matrix(&acheck_cols, &bcheck_cols).ok_or_else(|| {
            Error::NotPinned("no integral dual action realizes the permutation".into())
        })?;
        // pairing preservation: mstar^T · msub = 1
        if mat_mul(&transpose(&mstar), &msub) != identity(n) {
            return Err(Error::NotPinned("lattice action does not preserve the pairing".into()));
        }
        let mut order = 1;
        let mut p = mstar.clone();
        while p != identity(n) {
            p = mat_mul(&p, &mstar);
            order += 1;
            if order > 24 {
                return Err(Error::NotPinned("automorphism order out of range".into()));
            }
        }
        Ok(PinnedAutomorphism { simple_permutation: perm, mstar, msub, order })
    }

    pub fn is_identity(&self) -> bool {
        self.simple_permutation.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn apply_star(&self, x: &IVec) -> IVec {
        mat_vec(&self.mstar, x)
    }

    pub fn apply_star_q(&self, x: &QVec) -> QVec {
        mat_vec_q(&self.mstar, x)
    }

    pub fn apply_sub(&self, y: &IVec) -> IVec {
        mat_vec(&self.msub, y)
    }

    pub fn apply_sub_q(&self, y: &QVec) -> QVec {
        mat_vec_q(&self.msub, y)
    }

    pub fn compose(&self, other: &PinnedAutomorphism) -> Self {
        let perm: Vec<usize> =
            (0..self.simple_permutation.len()).map(|i| self.simple_permutation[other.simple_permutation[i]]).collect();
        let mstar = mat_mul(&self.mstar, &other.mstar);
        let msub = mat_mul(&self.msub, &other.msub);
        let mut order = 1;
        let mut p = mstar.clone();
        let n = mstar.len();
        while p != identity(n) {
            p = mat_mul(&p, &mstar);
            order += 1;
        }
        PinnedAutomorphism { simple_permutation: perm, mstar, msub, order }
    }

    pub fn power(&self, k: usize) -> Self {
        let n = self.mstar.len();
        let mut out = PinnedAutomorphism {
            simple_permutation: (0..self.simple_permutation.len()).collect(),
            mstar: identity(n),
            msub: identity(n),
            order: 1,
        };
        for _ in 0..k {
            out = self.compose(&out);
        }
        out
    }

    /// Does this automorphism fix the Weyl element `w` (as lattice maps,
    /// `a∘w∘a⁻¹ = w`)?
    pub fn commutes_with(&self, w: &WeylElement) -> bool {
        mat_mul(&self.mstar, &w.mstar) == mat_mul(&w.mstar, &self.mstar)
    }
}

fn solve_matrix(a: &IMat, b: &IMat) -> Option<IMat> {
    // find integral M with M·a = b, column by column of aᵀ… we need M such
    // that M·(columns of a) = columns of b, i.e. aᵀ·Mᵀ = bᵀ row-wise.
    let at = transpose(a);
    let n = a.len();
    let mut mt = Vec::with_capacity(n);
    let bt = transpose(b);
    for row in &bt {
        // row of bᵀ = image coordinates; solve aᵀ·x = row? We need M a = b,
        // so for each basis direction: M = b·a⁻¹. Solve aᵀ mᵀ_col = bᵀ_col.
        mt.push(solve(&at, row)?);
    }
    // mt rows are columns of… verify directly and return.
    let m = transpose(&mt);
    if mat_mul(&m, a) == *b {
        Some(m)
    } else {
        None
    }
}

/// Orbit classification of the roots under a pinned automorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitKind {
    R1,
    R2,
    R3,
}

#[derive(Clone, Debug)]
pub struct OrbitType {
    /// Root indices of the orbit, lexicographically smallest representative
    /// first.
    pub orbit: Vec<usize>,
    pub kind: OrbitKind,
    /// −1 exactly for R3 orbits: the automorphism power fixing the root acts
    /// by −1 on its root line.
    pub line_sign: i64,
}

impl OrbitType {
    pub fn size(&self) -> usize {
        self.orbit.len()
    }
}

/// Sign by which `b = a^k` acts on the root line of a `b`-fixed root, per the
/// simply-laced composition rules: −1 exactly when the root is the sum of a
/// pair swapped by `b`.
pub fn line_sign(datum: &BasedRootDatum, b: &PinnedAutomorphism, root_idx: usize) -> Result<i64> {
    let r = &datum.roots()[root_idx];
    if b.apply_star(&r.vec) != r.vec {
        return Err(Error::NotFixed("line sign asked for a non-fixed root".into()));
    }
    if b.is_identity() {
        return Ok(1);
    }
    check_simply_laced_on_moved(datum, b)?;
    for beta in datum.roots() {
        let img = b.apply_star(&beta.vec);
        if img != beta.vec && add_vec(&beta.vec, &img) == r.vec {
            return Ok(-1);
        }
    }
    Ok(1)
}

fn check_simply_laced_on_moved(datum: &BasedRootDatum, a: &PinnedAutomorphism) -> Result<()> {
    // The sign rules are only established for simply-laced components moved
    // by the automorphism; reject anything else instead of guessing.
    if a.is_identity() {
        return Ok(());
    }
    // components: roots connected through non-orthogonality
    let n = datum.roots().len();
    let mut comp = vec![usize::MAX; n];
    let mut next = 0usize;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            if comp[i] != usize::MAX {
                continue;
            }
            comp[i] = next;
            for j in 0..n {
                if comp[j] == usize::MAX
                    && datum.invariant_form(&datum.roots()[i].vec, &datum.roots()[j].vec) != 0
                {
                    stack.push(j);
                }
            }
        }
        next += 1;
    }
    for c in 0..next {
        let moved = (0..n)
            .any(|i| comp[i] == c && a.apply_star(&datum.roots()[i].vec) != datum.roots()[i].vec);
        if moved {
            let ls: HashSet<i64> = (0..n)
                .filter(|&i| comp[i] == c)
                .map(|i| datum.length2(&datum.roots()[i].vec))
                .collect();
            if ls.len() > 1 {
                return Err(Error::Unsupported(
                    "orbit sign rules are only defined for simply-laced components moved by the automorphism"
                        .into(),
                ));
            }
        }
    }
    Ok(())
}

/// Partition the roots into ⟨a⟩-orbits and classify each as R1/R2/R3.
pub fn classify_orbits(datum: &BasedRootDatum, a: &PinnedAutomorphism) -> Result<Vec<OrbitType>> {
    check_simply_laced_on_moved(datum, a)?;
    let n = datum.roots().len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut i = start;
        loop {
            seen[i] = true;
            orbit.push(i);
            let img = a.apply_star(&datum.roots()[i].vec);
            i = datum.root_index(&img).ok_or_else(|| {
                Error::NotPinned("automorphism does not permute the roots".into())
            })?;
            if i == start {
                break;
            }
        }
        orbit.sort_unstable();
        let size = orbit.len();
        let b = a.power(size);
        let ls = line_sign(datum, &b, orbit[0])?;
        let kind = if ls == -1 {
            OrbitKind::R3
        } else {
            // R2: some member sums with a power-image to a root
            let mut is_r2 = false;
            'search: for &ri in &orbit {
                let rv = &datum.roots()[ri].vec;
                let mut img = a.apply_star(rv);
                for _ in 1..size {
                    if datum.is_root(&add_vec(rv, &img)) {
                        is_r2 = true;
                        break 'search;
                    }
                    img = a.apply_star(&img);
                }
            }
            if is_r2 {
                OrbitKind::R2
            } else {
                OrbitKind::R1
            }
        };
        out.push(OrbitType { orbit, kind, line_sign: ls });
    }
    out.sort_by_key(|o| o.orbit[0]);
    Ok(out)
}

/// Number of a-orbits on the positive roots that are not of type R3. Equals
/// the number of positive roots of the folded datum.
pub fn orbit_count_non_r3(datum: &BasedRootDatum, a: &PinnedAutomorphism) -> Result<usize> {
    let orbits = classify_orbits(datum, a)?;
    Ok(orbits
        .iter()
        .filter(|o| o.kind != OrbitKind::R3 && datum.roots()[o.orbit[0]].is_positive())
        .count())
}

/// The folded datum together with the projection/inclusion data relating it
/// to the ambient one.
#[derive(Clone, Debug)]
pub struct Folding {
    pub datum: BasedRootDatum,
    /// Orbits of the automorphism on the simple indices (each sorted),
    /// indexing the folded basis.
    pub orbits: Vec<Vec<usize>>,
    /// Projection `X^* → X^*_fold` (coinvariants): sum coordinates over each
    /// orbit.
    pub project: IMat,
    /// Inclusion `X_*^fold → X_*` (invariants): orbit sums of the basis.
    pub include: IMat,
}

impl Folding {
    pub fn project_star(&self, x: &IVec) -> IVec {
        mat_vec(&self.project, x)
    }

    pub fn project_star_q(&self, x: &QVec) -> QVec {
        mat_vec_q(&self.project, x)
    }

    pub fn include_sub(&self, y: &IVec) -> IVec {
        mat_vec(&self.include, y)
    }

    /// Project a cocharacter-side vector to coinvariant coordinates: for a
    /// permutation action the coinvariant class of `Σ y_i f_i` has orbit
    /// coordinates `Σ_{i∈o} y_i`.
    pub fn project_sub_q(&self, y: &QVec) -> QVec {
        self.orbits
            .iter()
            .map(|o| o.iter().fold(Rat::zero(), |acc, &i| acc + y[i]))
            .collect()
    }
}

/// Fold a based root datum along a pinned automorphism: the based root datum
/// of the fixed group, on the coinvariant character lattice and the invariant
/// cocharacter lattice. Restricted roots are restrictions of roots, keeping
/// only the non-divisible ones.
pub fn fold(datum: &BasedRootDatum, a: &PinnedAutomorphism) -> Result<Folding> {
    let n = datum.rank();
    if a.simple_permutation.len() != n {
        return Err(Error::NotPinned("automorphism rank mismatch".into()));
    }
    // The lattice action must be basis-permuting for the coinvariant and
    // invariant lattices to have the transparent orbit bases used here. This
    // holds for the simply connected constructors (permuted fundamental
    // weights / simple coroots).
    let is_perm_matrix = |m: &IMat| {
        m.iter().all(|row| row.iter().all(|&x| x == 0 || x == 1))
            && (0..m.len()).all(|j| m.iter().map(|row| row[j]).sum::<i64>() == 1)
            && m.iter().all(|row| row.iter().sum::<i64>() == 1)
    };
    if !is_perm_matrix(&a.mstar) || !is_perm_matrix(&a.msub) {
        return Err(Error::Unsupported(
            "folding needs a basis-permuting lattice action (simply connected coordinates)".into(),
        ));
    }
    if datum.dim() != n {
        return Err(Error::Unsupported("folding needs a full-rank based datum".into()));
    }

    // orbits of the permutation on basis indices
    let perm: Vec<usize> = (0..n)
        .map(|j| (0..n).find(|&i| a.mstar[i][j] == 1).unwrap())
        .collect();
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    let mut placed = vec![false; n];
    for s in 0..n {
        if placed[s] {
            continue;
        }
        let mut o = Vec::new();
        let mut i = s;
        loop {
            placed[i] = true;
            o.push(i);
            i = perm[i];
            if i == s {
                break;
            }
        }
        o.sort_unstable();
        orbits.push(o);
    }
    orbits.sort();
    let k = orbits.len();
    let mut project = vec![vec![0i64; n]; k];
    let mut include = vec![vec![0i64; k]; n];
    for (oi, o) in orbits.iter().enumerate() {
        for &i in o {
            project[oi][i] = 1;
            include[i][oi] = 1;
        }
    }

    // restrictions of all roots
    let restrictions: HashSet<IVec> =
        datum.roots().iter().map(|r| mat_vec(&project, &r.vec)).collect();
    let divisible: HashSet<IVec> = restrictions
        .iter()
        .filter(|v| {
            let half: Option<IVec> =
                v.iter().map(|&x| if x % 2 == 0 { Some(x / 2) } else { None }).collect();
            half.map_or(false, |h| restrictions.contains(&h))
        })
        .cloned()
        .collect();

    // simple-root orbits give the folded simples
    let mut simple_orbits: Vec<Vec<usize>> = Vec::new();
    let mut placed = vec![false; n];
    for s in 0..n {
        if placed[s] {
            continue;
        }
        let mut o = Vec::new();
        let mut i = s;
        loop {
            placed[i] = true;
            o.push(i);
            i = a.simple_permutation[i];
            if i == s {
                break;
            }
        }
        o.sort_unstable();
        simple_orbits.push(o);
    }
    simple_orbits.sort();

    let mut fold_simple_roots = Vec::new();
    let mut fold_simple_coroots = Vec::new();
    for o in &simple_orbits {
        let rep = o[0];
        let restricted = mat_vec(&project, &datum.simple_roots()[rep]);
        if divisible.contains(&restricted) {
            return Err(Error::Unsupported(
                "divisible restricted simple root; not a folding this crate supports".into(),
            ));
        }
        // coroot: orbit sum, doubled when twice the restriction also occurs
        let mut csum = vec![0i64; n];
        for &i in o {
            csum = add_vec(&csum, &datum.simple_coroots()[i]);
        }
        let doubled: IVec = restricted.iter().map(|&x| 2 * x).collect();
        let factor = if restrictions.contains(&doubled) { 2 } else { 1 };
        csum = scale_vec(factor, &csum);
        // invariant vector in orbit coordinates: value at one index per orbit
        let fold_coroot: IVec = orbits
            .iter()
            .map(|ob| {
                let v = csum[ob[0]];
                debug_assert!(ob.iter().all(|&i| csum[i] == v));
                v
            })
            .collect();
        fold_simple_roots.push(restricted);
        fold_simple_coroots.push(fold_coroot);
    }

    let folded = BasedRootDatum::new(fold_simple_roots, fold_simple_coroots)?;

    // the generated roots must be exactly the non-divisible restrictions
    let generated: HashSet<IVec> = folded.roots().iter().map(|r| r.vec.clone()).collect();
    let nondivisible: HashSet<IVec> =
        restrictions.difference(&divisible).cloned().collect();
    if generated != nondivisible {
        return Err(Error::Inconsistent(
            "folded root system differs from the non-divisible restricted roots".into(),
        ));
    }

    Ok(Folding { datum: folded, orbits, project, include })
}

/// Find a root `α` with `α(γ) = 1` for `γ = Π exp(2πi·β_i^∨/2)`, the product
/// of the order-two elements attached to the given roots. The product is
/// first rewritten by merging non-orthogonal pairs of equal or 3:1 length
/// ratio, then a root is selected: any factor when the remaining factors are
/// mutually orthogonal, otherwise the long root of a non-orthogonal 2:1 pair.
pub fn trivializing_real_root(datum: &BasedRootDatum, betas: &[IVec]) -> Result<IVec> {
    if betas.is_empty() {
        return Err(Error::Singular("empty root list".into()));
    }
    for b in betas {
        if !datum.is_root(b) {
            return Err(Error::InvalidDatum("input vector is not a root".into()));
        }
    }
    let mut factors: Vec<IVec> = betas.to_vec();
    // merge step
    'merge: loop {
        for i in 0..factors.len() {
            for j in 0..factors.len() {
                if i == j {
                    continue;
                }
                // a repeated or negated factor cancels: the attached torus
                // elements square to 1 and depend only on the root line
                if factors[i] == factors[j] || factors[i] == neg_vec(&factors[j]) {
                    let (hi, lo) = if i > j { (i, j) } else { (j, i) };
                    factors.remove(hi);
                    factors.remove(lo);
                    continue 'merge;
                }
                let (bi, bj) = (&factors[i], &factors[j]);
                if datum.invariant_form(bi, bj) == 0 {
                    continue;
                }
                let li = datum.length2(bi);
                let lj = datum.length2(bj);
                if li == lj || li == 3 * lj || lj == 3 * li {
                    let sum = add_vec(bi, bj);
                    let diff = sub_vec(bi, bj);
                    let merged = if datum.is_root(&sum) {
                        sum
                    } else if datum.is_root(&diff) {
                        diff
                    } else {
                        return Err(Error::Inconsistent(
                            "non-orthogonal pair with neither sum nor difference a root".into(),
                        ));
                    };
                    let (hi, lo) = if i > j { (i, j) } else { (j, i) };
                    factors.remove(hi);
                    factors.remove(lo);
                    factors.push(merged);
                    continue 'merge;
                }
            }
        }
        break;
    }
    // selection step; a fully cancelled product is trivial, so any root works
    if factors.is_empty() {
        return Ok(betas[0].clone());
    }
    let mut alpha: Option<IVec> = None;
    'select: for i in 0..factors.len() {
        for j in 0..factors.len() {
            if i != j && datum.invariant_form(&factors[i], &factors[j]) != 0 {
                let (li, lj) = (datum.length2(&factors[i]), datum.length2(&factors[j]));
                if li == 2 * lj {
                    alpha = Some(factors[i].clone());
                    break 'select;
                }
            }
        }
    }
    let alpha = alpha.unwrap_or_else(|| factors[0].clone());
    // exactness guarantee: Σ ⟨α, β_i^∨⟩ must be even
    let gamma_pairing: i64 = betas
        .iter()
        .map(|b| {
            let idx = datum.root_index(b).unwrap();
            dot_ii(&alpha, &datum.roots()[idx].coroot)
        })
        .sum();
    if gamma_pairing % 2 != 0 {
        return Err(Error::Inconsistent(format!(
            "selected root does not trivialize the product (pairing {gamma_pairing})"
        )));
    }
    Ok(alpha)
}

/// Angle vector of `γ = Π exp(2πi·β_i^∨/2)` in `X_* ⊗ Q`.
pub fn gamma_angle(datum: &BasedRootDatum, betas: &[IVec]) -> Result<QVec> {
    let mut t = vec![Rat::zero(); datum.dim()];
    for b in betas {
        let idx = datum
            .root_index(b)
            .ok_or_else(|| Error::InvalidDatum("input vector is not a root".into()))?;
        for (ti, ci) in t.iter_mut().zip(&datum.roots()[idx].coroot) {
            *ti += Rat::new(*ci, 2);
        }
    }
    Ok(t)
}
