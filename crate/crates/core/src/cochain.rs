//! Exterior-algebra bookkeeping: shapes, canonical wedge words, cochain
//! vectors and the wedge product.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyalg::{binom, MonomialDual};
use crate::rational::{parse_q, Q};

/// Which Lie algebra the cochains live on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algebra {
    /// All formal Hamiltonian vector fields; degree-1 duals allowed.
    Ham,
    /// Hamiltonians vanishing to second order; no degree-1 duals.
    Ham0,
}

impl Algebra {
    pub fn name(self) -> &'static str {
        match self {
            Algebra::Ham => "ham",
            Algebra::Ham0 => "ham0",
        }
    }

    /// Smallest polynomial degree whose dual may appear in a cochain.
    pub fn min_part(self) -> u32 {
        match self {
            Algebra::Ham => 1,
            Algebra::Ham0 => 2,
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algebra {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ham" => Ok(Algebra::Ham),
            "ham0" => Ok(Algebra::Ham0),
            other => Err(Error::Domain(format!("unknown algebra `{other}` (expected ham or ham0)"))),
        }
    }
}

/// Dimension of the space of degree-`j` homogeneous polynomials in `2n`
/// variables, `(j+2n-1)! / (j! (2n-1)!)`. Only `n = 1` is used for cochains,
/// where this is `j + 1`.
pub fn sym_power_dim(j: u32, n: u32) -> u64 {
    binom((j + 2 * n - 1) as i64, j as i64) as u64
}

/// Multiplicities `k_j` of duals of degree-`j` polynomials in a wedge word.
/// Equivalently a partition of `w + 2m` into `m` parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    /// `(part j, multiplicity k_j)` with `k_j > 0`, sorted by part.
    parts: Vec<(u32, u32)>,
}

impl Shape {
    pub fn new(mut parts: Vec<(u32, u32)>) -> Self {
        parts.retain(|&(_, k)| k > 0);
        parts.sort_unstable();
        Shape { parts }
    }

    pub fn parts(&self) -> &[(u32, u32)] {
        &self.parts
    }

    pub fn multiplicity(&self, j: u32) -> u32 {
        self.parts.iter().find(|(p, _)| *p == j).map_or(0, |(_, k)| *k)
    }

    /// Cochain degree `m = sum k_j`.
    pub fn degree(&self) -> usize {
        self.parts.iter().map(|(_, k)| *k as usize).sum()
    }

    /// Weight `sum (j-2) k_j`.
    pub fn weight(&self) -> i32 {
        self.parts.iter().map(|&(j, k)| (j as i32 - 2) * k as i32).sum()
    }

    /// Parts in ascending order, each repeated `k_j` times.
    pub fn part_sequence(&self) -> Vec<u32> {
        self.parts.iter().flat_map(|&(j, k)| std::iter::repeat_n(j, k as usize)).collect()
    }

    /// `prod_j C(j+1, k_j)`.
    pub fn basis_size(&self) -> u64 {
        self.parts.iter().map(|&(j, k)| binom(j as i64 + 1, k as i64) as u64).product()
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (j, k)) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "k{j}={k}")?;
        }
        f.write_str("}")
    }
}

/// All shapes of degree `m` and weight `w`, honoring `k_j <= j+1`, `k_1 = 0`
/// for `ham0` and `k_2 = 0` when `relative`.
///
/// Order: lexicographic on the ascending part sequence.
pub fn enumerate_shapes(m: usize, w: i32, algebra: Algebra, relative: bool) -> Vec<Shape> {
    let total = w + 2 * m as i32;
    let mut out = Vec::new();
    if total < 0 {
        return out;
    }
    let mut cur = Vec::new();
    shapes_rec(algebra.min_part(), m as u32, total as u32, relative, &mut cur, &mut out);
    out
}

fn shapes_rec(j: u32, rem_m: u32, rem_sum: u32, relative: bool, cur: &mut Vec<(u32, u32)>, out: &mut Vec<Shape>) {
    if rem_m == 0 {
        if rem_sum == 0 {
            out.push(Shape { parts: cur.clone() });
        }
        return;
    }
    // every remaining part is at least j
    if j * rem_m > rem_sum {
        return;
    }
    let cap = if relative && j == 2 { 0 } else { (j + 1).min(rem_m) };
    for k in (0..=cap).rev() {
        if k * j > rem_sum {
            continue;
        }
        if k > 0 {
            cur.push((j, k));
        }
        shapes_rec(j + 1, rem_m - k, rem_sum - k * j, relative, cur, out);
        if k > 0 {
            cur.pop();
        }
    }
}

/// A wedge of distinct duals, stored in canonical `(R, r)` order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WedgeWord(Vec<MonomialDual>);

impl WedgeWord {
    pub fn empty() -> Self {
        WedgeWord(Vec::new())
    }

    pub fn factors(&self) -> &[MonomialDual] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> i32 {
        self.0.iter().map(|z| z.weight()).sum()
    }

    pub fn h_eigenvalue(&self) -> i32 {
        self.0.iter().map(|z| z.h_eigenvalue()).sum()
    }

    pub fn shape(&self) -> Shape {
        let mut parts: Vec<(u32, u32)> = Vec::new();
        for z in &self.0 {
            match parts.last_mut() {
                Some((j, k)) if *j == z.degree() => *k += 1,
                _ => parts.push((z.degree(), 1)),
            }
        }
        Shape { parts }
    }
}

/// Canonical word order: by the degree sequence first (so shapes are
/// contiguous and ordered as in [`enumerate_shapes`]), then by the index
/// sequence.
impl Ord for WedgeWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().map(|z| z.degree()).cmp(other.0.iter().map(|z| z.degree())))
            .then_with(|| self.0.iter().map(|z| z.r()).cmp(other.0.iter().map(|z| z.r())))
    }
}

impl PartialOrd for WedgeWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for WedgeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, z) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("^")?;
            }
            write!(f, "{z}")?;
        }
        Ok(())
    }
}

/// Sorts `factors` into canonical order. Returns the permutation sign, or
/// `None` if a factor repeats.
pub fn normalize(mut factors: Vec<MonomialDual>) -> Option<(i32, WedgeWord)> {
    let mut sign = 1;
    // insertion sort; words are short
    for i in 1..factors.len() {
        let mut k = i;
        while k > 0 {
            match factors[k - 1].cmp(&factors[k]) {
                Ordering::Greater => {
                    factors.swap(k - 1, k);
                    sign = -sign;
                    k -= 1;
                }
                Ordering::Equal => return None,
                Ordering::Less => break,
            }
        }
    }
    Some((sign, WedgeWord(factors)))
}

/// Canonically ordered basis of `prod_j Lambda^{k_j} S_j` for one shape.
pub fn wedge_basis(shape: &Shape) -> Vec<WedgeWord> {
    let blocks: Vec<Vec<Vec<MonomialDual>>> = shape
        .parts
        .iter()
        .map(|&(j, k)| {
            subsets(j + 1, k)
                .into_iter()
                .map(|s| s.into_iter().map(|r| MonomialDual::raw(r, j)).collect())
                .collect()
        })
        .collect();
    let mut out = vec![Vec::with_capacity(shape.degree())];
    for block in &blocks {
        let mut next = Vec::with_capacity(out.len() * block.len());
        for prefix in &out {
            for choice in block {
                let mut w = prefix.clone();
                w.extend_from_slice(choice);
                next.push(w);
            }
        }
        out = next;
    }
    out.into_iter().map(WedgeWord).collect()
}

/// `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: u32, k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k as usize);
    fn rec(start: u32, n: u32, k: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k as usize {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Sparse cochain of fixed degree and weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainVector {
    degree: usize,
    weight: i32,
    terms: BTreeMap<WedgeWord, Q>,
}

impl CochainVector {
    pub fn zero(degree: usize, weight: i32) -> Self {
        CochainVector {
            degree,
            weight,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_word(word: WedgeWord) -> Self {
        let mut v = Self::zero(word.degree(), word.weight());
        v.terms.insert(word, Q::one());
        v
    }

    /// `z_1 ^ ... ^ z_m` with the sign of the sorting permutation applied.
    pub fn from_factors(factors: &[MonomialDual]) -> Self {
        let degree = factors.len();
        let weight = factors.iter().map(|z| z.weight()).sum();
        let mut v = Self::zero(degree, weight);
        if let Some((s, w)) = normalize(factors.to_vec()) {
            v.terms.insert(w, Q::from_integer(s.into()));
        }
        v
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn weight(&self) -> i32 {
        self.weight
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WedgeWord, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &WedgeWord) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    /// Leading (smallest) word in canonical order.
    pub fn leading(&self) -> Option<(&WedgeWord, &Q)> {
        self.terms.iter().next()
    }

    pub fn add_term(&mut self, word: WedgeWord, c: Q) {
        debug_assert_eq!(word.degree(), self.degree);
        debug_assert_eq!(word.weight(), self.weight);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(word) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &CochainVector, s: &Q) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c * s);
        }
    }

    pub fn scaled(&self, s: &Q) -> CochainVector {
        let mut out = Self::zero(self.degree, self.weight);
        if !s.is_zero() {
            out.terms = self.terms.iter().map(|(w, c)| (w.clone(), c * s)).collect();
        }
        out
    }

    pub(crate) fn from_terms(degree: usize, weight: i32, terms: BTreeMap<WedgeWord, Q>) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        CochainVector { degree, weight, terms }
    }
}

/// Wedge product; bilinear, associative and graded-commutative.
pub fn wedge(u: &CochainVector, v: &CochainVector) -> CochainVector {
    let mut out = CochainVector::zero(u.degree + v.degree, u.weight + v.weight);
    for (wu, cu) in &u.terms {
        for (wv, cv) in &v.terms {
            let mut f = Vec::with_capacity(out.degree);
            f.extend_from_slice(&wu.0);
            f.extend_from_slice(&wv.0);
            if let Some((s, w)) = normalize(f) {
                let c = cu * cv;
                out.add_term(w, if s < 0 { -c } else { c });
            }
        }
    }
    out
}

/// The transverse symplectic cochain `z[0,1]^z[1,1]` (degree 2, weight -2).
pub fn omega() -> CochainVector {
    CochainVector::from_word(WedgeWord(vec![MonomialDual::raw(0, 1), MonomialDual::raw(1, 1)]))
}

/// Parses `z[r,R]^z[r,R]^...` (or `1` for the empty word) into a sign and a
/// canonical word. A repeated factor is an error.
pub fn parse_word(s: &str, line: usize) -> Result<(i32, WedgeWord)> {
    let s = s.trim();
    if s == "1" {
        return Ok((1, WedgeWord::empty()));
    }
    let mut factors = Vec::new();
    for part in s.split('^') {
        let part = part.trim();
        let inner = part
            .strip_prefix("z[")
            .and_then(|p| p.strip_suffix(']'))
            .ok_or_else(|| Error::parse(line, format!("expected z[r,R], got `{part}`")))?;
        let (r, big_r) = inner
            .split_once(',')
            .ok_or_else(|| Error::parse(line, format!("expected z[r,R], got `{part}`")))?;
        let r: u32 = r.trim().parse().map_err(|_| Error::parse(line, format!("bad index in `{part}`")))?;
        let big_r: u32 = big_r.trim().parse().map_err(|_| Error::parse(line, format!("bad degree in `{part}`")))?;
        factors.push(MonomialDual::new(r, big_r).map_err(|e| Error::parse(line, e.to_string()))?);
    }
    normalize(factors).ok_or_else(|| Error::parse(line, format!("repeated wedge factor in `{s}`")))
}

/// One `c * word` line of the basis text format.
pub fn format_term(word: &WedgeWord, c: &Q) -> String {
    format!("{c} * {word}")
}

pub fn parse_term(s: &str, line: usize) -> Result<(WedgeWord, Q)> {
    let (c, w) = s
        .split_once('*')
        .ok_or_else(|| Error::parse(line, "expected `c * z[..]^..`"))?;
    let c = parse_q(c).ok_or_else(|| Error::parse(line, format!("bad coefficient `{}`", c.trim())))?;
    let (sign, word) = parse_word(w, line)?;
    Ok((word, if sign < 0 { -c } else { c }))
}

/// Writes vectors in the basis text format: each vector is introduced by a
/// `# vector <i>` line followed by one `c * word` line per term.
pub fn write_vectors(out: &mut String, vectors: &[CochainVector]) {
    use std::fmt::Write;
    for (i, v) in vectors.iter().enumerate() {
        let _ = writeln!(out, "# vector {}", i + 1);
        for (w, c) in &v.terms {
            let _ = writeln!(out, "{}", format_term(w, c));
        }
    }
}

/// Inverse of [`write_vectors`]. Lines starting with `#` other than vector
/// markers are ignored; `(line number, text)` pairs let callers keep line
/// numbers of a larger file.
pub fn read_vectors<'a>(
    lines: impl Iterator<Item = (usize, &'a str)>,
    degree: usize,
    weight: i32,
) -> Result<Vec<CochainVector>> {
    let mut out: Vec<CochainVector> = Vec::new();
    for (no, line) in lines {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(rest) = t.strip_prefix('#') {
            if rest.trim_start().starts_with("vector") {
                out.push(CochainVector::zero(degree, weight));
            }
            continue;
        }
        let (w, c) = parse_term(t, no)?;
        if w.degree() != degree || w.weight() != weight {
            return Err(Error::parse(
                no,
                format!("word {w} has degree {} weight {}, expected {degree}/{weight}", w.degree(), w.weight()),
            ));
        }
        let v = out
            .last_mut()
            .ok_or_else(|| Error::parse(no, "term before any `# vector` marker"))?;
        if v.terms.contains_key(&w) {
            return Err(Error::parse(no, format!("word {w} listed twice")));
        }
        v.add_term(w, c);
    }
    Ok(out)
}
