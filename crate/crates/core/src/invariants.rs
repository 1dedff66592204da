//! The `sp(2)`-trivial part of each graded cochain space.
//!
//! `sl(2)` acts on wedge words as a derivation and preserves shapes, so the
//! trivial isotypic component is computed shape by shape as
//! `ker E` restricted to the `H = 0` slice. `F v = 0` is then asserted; it
//! must hold by complete reducibility.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::budget::Budget;
use crate::cochain::{enumerate_shapes, normalize, read_vectors, wedge_basis, write_vectors, Algebra, CochainVector, Shape, WedgeWord};
use crate::error::{Error, Result};
use crate::linformgb::{kernel_basis, SparseMatrix};
use crate::modp::{multimodular, ModEchelon};
use crate::polyalg::{sl2_on_dual_int, Sl2Generator};
use crate::rational::{q, Q};

/// All wedge words of a given degree and weight, shape by shape in canonical
/// order, with a word -> column index.
#[derive(Clone, Debug)]
pub struct GradedAmbientBasis {
    pub degree: usize,
    pub weight: i32,
    pub algebra: Algebra,
    pub relative: bool,
    shapes: Vec<Shape>,
    words: Vec<WedgeWord>,
    index: HashMap<WedgeWord, usize>,
}

impl GradedAmbientBasis {
    pub fn new(degree: usize, weight: i32, algebra: Algebra, relative: bool) -> Self {
        let shapes = enumerate_shapes(degree, weight, algebra, relative);
        let words: Vec<WedgeWord> = shapes.iter().flat_map(wedge_basis).collect();
        let index = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        GradedAmbientBasis {
            degree,
            weight,
            algebra,
            relative,
            shapes,
            words,
            index,
        }
    }

    pub fn shapes(&self) -> &[Shape] {
        &self.shapes
    }

    pub fn words(&self) -> &[WedgeWord] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn index_of(&self, w: &WedgeWord) -> Option<usize> {
        self.index.get(w).copied()
    }
}

/// Action of a generator on one word, extended as a derivation.
pub(crate) fn act_on_word(g: Sl2Generator, word: &WedgeWord) -> Vec<(i64, WedgeWord)> {
    let f = word.factors();
    let mut out = Vec::new();
    for i in 0..f.len() {
        if let Some((c, t)) = sl2_on_dual_int(g, f[i]) {
            let mut nf = f.to_vec();
            nf[i] = t;
            if let Some((s, w)) = normalize(nf) {
                out.push((c * s as i64, w));
            }
        }
    }
    out
}

/// `g . v` for a cochain vector.
pub fn act(g: Sl2Generator, v: &CochainVector) -> CochainVector {
    let mut out = CochainVector::zero(v.degree(), v.weight());
    for (w, c) in v.terms() {
        for (k, t) in act_on_word(g, w) {
            out.add_term(t, c * q(k));
        }
    }
    out
}

/// Matrix of `g` in ambient coordinates (columns = source words).
pub fn sl2_operator_matrix(g: Sl2Generator, basis: &GradedAmbientBasis) -> Result<SparseMatrix> {
    let columns = basis
        .words
        .par_iter()
        .map(|w| {
            act_on_word(g, w)
                .into_iter()
                .map(|(c, t)| {
                    basis
                        .index_of(&t)
                        .map(|i| (i, q(c)))
                        .ok_or_else(|| Error::Consistency(format!("{g:?} maps {w} outside the ambient basis")))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SparseMatrix::from_columns(basis.len(), columns))
}

/// Echelon basis of the trivial isotypic component of one graded piece.
///
/// Vectors are monic in their leading (canonically smallest) word and no
/// leading word occurs in another vector, so coordinates of any element of the
/// span are read off at the leading words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantBasis {
    pub algebra: Algebra,
    pub relative: bool,
    pub degree: usize,
    pub weight: i32,
    vectors: Vec<CochainVector>,
    leading: Vec<WedgeWord>,
}

impl InvariantBasis {
    fn from_vectors(algebra: Algebra, relative: bool, degree: usize, weight: i32, vectors: Vec<CochainVector>) -> Result<Self> {
        let leading = vectors
            .iter()
            .map(|v| v.leading().map(|(w, _)| w.clone()).ok_or_else(|| Error::Consistency("zero basis vector".into())))
            .collect::<Result<Vec<_>>>()?;
        let b = InvariantBasis {
            algebra,
            relative,
            degree,
            weight,
            vectors,
            leading,
        };
        b.validate_echelon()?;
        Ok(b)
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[CochainVector] {
        &self.vectors
    }

    pub fn leading_words(&self) -> &[WedgeWord] {
        &self.leading
    }

    fn validate_echelon(&self) -> Result<()> {
        if !self.leading.windows(2).all(|p| p[0] < p[1]) {
            return Err(Error::Consistency("leading words not strictly increasing".into()));
        }
        for (i, v) in self.vectors.iter().enumerate() {
            if v.degree() != self.degree || v.weight() != self.weight {
                return Err(Error::Consistency(format!("vector {} has wrong degree/weight tags", i + 1)));
            }
            if !v.coeff(&self.leading[i]).is_one() {
                return Err(Error::Consistency(format!("vector {} is not monic", i + 1)));
            }
            for (j, l) in self.leading.iter().enumerate() {
                if j != i && !v.coeff(l).is_zero() {
                    return Err(Error::Consistency(format!("vector {} contains leading word of vector {}", i + 1, j + 1)));
                }
            }
        }
        Ok(())
    }

    /// Coordinates of `v` in this basis; fails if `v` is not in the span.
    pub fn expand(&self, v: &CochainVector) -> Result<Vec<(usize, Q)>> {
        if v.is_zero() {
            return Ok(Vec::new());
        }
        if v.degree() != self.degree || v.weight() != self.weight {
            return Err(Error::Consistency(format!(
                "cannot expand a ({}, {}) cochain in the ({}, {}) basis",
                v.degree(),
                v.weight(),
                self.degree,
                self.weight
            )));
        }
        let mut residual = v.clone();
        let mut coords = Vec::new();
        for (i, l) in self.leading.iter().enumerate() {
            let c = v.coeff(l);
            if !c.is_zero() {
                residual.add_scaled(&self.vectors[i], &-c.clone());
                coords.push((i, c));
            }
        }
        if let Some((w, c)) = residual.leading() {
            return Err(Error::Consistency(format!(
                "cochain leaves the invariant span ({} residual terms, e.g. {c} * {w})",
                residual.len()
            )));
        }
        Ok(coords)
    }

    /// Cochain `sum_i coords[i] * v_i`.
    pub fn combine(&self, coords: &[(usize, Q)]) -> CochainVector {
        let mut out = CochainVector::zero(self.degree, self.weight);
        for (i, c) in coords {
            out.add_scaled(&self.vectors[*i], c);
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# basis algebra={} weight={} degree={} relative={} dim={}",
            self.algebra,
            self.weight,
            self.degree,
            self.relative,
            self.dim()
        );
        write_vectors(&mut s, &self.vectors);
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (no, header) = lines.next().ok_or_else(|| Error::parse(1, "empty basis file"))?;
        let fields = header
            .trim()
            .strip_prefix("# basis")
            .ok_or_else(|| Error::parse(no, "expected `# basis ...` header"))?;
        let mut kv: BTreeMap<&str, &str> = BTreeMap::new();
        for f in fields.split_whitespace() {
            let (k, v) = f.split_once('=').ok_or_else(|| Error::parse(no, format!("bad header field `{f}`")))?;
            kv.insert(k, v);
        }
        let get = |k: &str| kv.get(k).copied().ok_or_else(|| Error::parse(no, format!("header lacks `{k}`")));
        let algebra: Algebra = get("algebra")?.parse().map_err(|e: Error| Error::parse(no, e.to_string()))?;
        let weight: i32 = get("weight")?.parse().map_err(|_| Error::parse(no, "bad weight"))?;
        let degree: usize = get("degree")?.parse().map_err(|_| Error::parse(no, "bad degree"))?;
        let relative: bool = get("relative")?.parse().map_err(|_| Error::parse(no, "bad relative flag"))?;
        let dim: usize = get("dim")?.parse().map_err(|_| Error::parse(no, "bad dim"))?;
        let vectors = read_vectors(lines, degree, weight)?;
        if vectors.len() != dim {
            return Err(Error::parse(no, format!("header dim={dim} but {} vectors", vectors.len())));
        }
        if let Some(w) = vectors.iter().flat_map(|v| v.terms()).map(|(w, _)| w).find(|w| {
            let sh = w.shape();
            (algebra == Algebra::Ham0 && sh.multiplicity(1) > 0) || (relative && sh.multiplicity(2) > 0)
        }) {
            return Err(Error::parse(no, format!("word {w} violates the algebra/relative constraints")));
        }
        Self::from_vectors(algebra, relative, degree, weight, vectors).map_err(|e| Error::parse(no, e.to_string()))
    }
}

/// Invariant vectors inside one shape block.
///
/// On the `H = 0` slice the Casimir is a multiple of `FE`, which acts on the
/// weight-0 line of the irreducible of highest weight `2k` by `k(k+1)`. The
/// product of `FE - k(k+1)` over the `k` present is therefore a projector onto
/// the invariants up to scale. Images of random vectors are echeloned mod a
/// prime and lifted by rational reconstruction; the lift is accepted only if
/// `E` and `F` kill it exactly, otherwise the exact kernel is computed.
fn shape_invariants(shape: &Shape, budget: &Budget) -> Result<Vec<CochainVector>> {
    let words = wedge_basis(shape);
    let slice0: Vec<&WedgeWord> = words.iter().filter(|w| w.h_eigenvalue() == 0).collect();
    if slice0.is_empty() {
        return Ok(Vec::new());
    }
    budget.check_slice(slice0.len(), &format!("shape {shape}"))?;
    budget.check_time(&format!("shape {shape}"))?;
    let n2 = words.iter().filter(|w| w.h_eigenvalue() == 2).count();
    let target = slice0.len() - n2;
    if target == 0 {
        return Ok(Vec::new());
    }
    if let Some(vs) = projected_invariants(shape, &words, &slice0, target) {
        return Ok(vs);
    }
    exact_invariants(shape, &words, &slice0)
}

fn projected_invariants(shape: &Shape, words: &[WedgeWord], slice0: &[&WedgeWord], target: usize) -> Option<Vec<CochainVector>> {
    let index0: HashMap<&WedgeWord, usize> = slice0.iter().enumerate().map(|(i, w)| (*w, i)).collect();
    let n = slice0.len();
    // FE on the slice, column by column
    let fe: Vec<Vec<(usize, i64)>> = slice0
        .iter()
        .map(|w| {
            let mut col: BTreeMap<usize, i64> = BTreeMap::new();
            for (c1, t) in act_on_word(Sl2Generator::E, w) {
                for (c2, u) in act_on_word(Sl2Generator::F, &t) {
                    *col.entry(index0[&u]).or_insert(0) += c1 * c2;
                }
            }
            col.into_iter().filter(|(_, c)| *c != 0).collect()
        })
        .collect();
    // highest weights 2k present in the block, k >= 1
    let mut count: HashMap<i32, i64> = HashMap::new();
    for w in words {
        *count.entry(w.h_eigenvalue()).or_insert(0) += 1;
    }
    let max_h = count.keys().copied().max().unwrap_or(0);
    let eigen: Vec<i64> = (1..=max_h / 2)
        .filter(|k| count.get(&(2 * k)).unwrap_or(&0) > count.get(&(2 * k + 2)).unwrap_or(&0))
        .map(|k| (k * (k + 1)) as i64)
        .collect();

    let (degree, weight) = (shape.degree(), shape.weight());
    let to_vector = |row: &Vec<(usize, Q)>| {
        let terms = row.iter().map(|(i, c)| (slice0[*i].clone(), c.clone())).collect();
        CochainVector::from_terms(degree, weight, terms)
    };
    let rows = multimodular(
        |f| {
            let fe: Vec<Vec<(usize, u64)>> = fe
                .iter()
                .map(|col| col.iter().map(|(i, c)| (*i, f.of_i64(*c))).collect())
                .collect();
            let eigen: Vec<u64> = eigen.iter().map(|c| f.of_i64(*c)).collect();
            let mut rng = StdRng::seed_from_u64(f.p());
            let mut ech = ModEchelon::new(f, n);
            let mut tries = 0;
            while ech.len() < target {
                tries += 1;
                if tries > target + 8 {
                    return None;
                }
                let mut v: Vec<u64> = (0..n).map(|_| rng.gen_range(0..f.p())).collect();
                for &c in &eigen {
                    let mut out: Vec<u64> = v.iter().map(|x| f.sub(0, f.mul(c, *x))).collect();
                    for (j, col) in fe.iter().enumerate() {
                        let x = v[j];
                        if x != 0 {
                            for (i, a) in col {
                                out[*i] = f.add(out[*i], f.mul(*a, x));
                            }
                        }
                    }
                    v = out;
                }
                ech.insert(v);
            }
            Some(ech)
        },
        |rows| {
            rows.iter().all(|row| {
                let v = to_vector(row);
                act(Sl2Generator::E, &v).is_zero() && act(Sl2Generator::F, &v).is_zero()
            })
        },
    )?;
    Some(rows.iter().map(to_vector).collect())
}

/// `ker E` on the slice by exact rational elimination.
fn exact_invariants(shape: &Shape, words: &[WedgeWord], slice0: &[&WedgeWord]) -> Result<Vec<CochainVector>> {
    let slice2: HashMap<&WedgeWord, usize> = words
        .iter()
        .filter(|w| w.h_eigenvalue() == 2)
        .enumerate()
        .map(|(i, w)| (w, i))
        .collect();
    let columns = slice0
        .iter()
        .map(|w| {
            act_on_word(Sl2Generator::E, w)
                .into_iter()
                .map(|(c, t)| (slice2[&t], q(c)))
                .collect()
        })
        .collect();
    let e = SparseMatrix::from_columns(slice2.len(), columns);
    let (degree, weight) = (shape.degree(), shape.weight());
    let kernel = kernel_basis(&e);
    let vectors: Vec<CochainVector> = kernel
        .forms()
        .iter()
        .map(|f| {
            let terms = f.terms().iter().map(|(i, c)| (slice0[*i].clone(), c.clone())).collect();
            CochainVector::from_terms(degree, weight, terms)
        })
        .collect();
    for v in &vectors {
        if !act(Sl2Generator::F, v).is_zero() {
            return Err(Error::Consistency(format!("ker E vector of {shape} not killed by F")));
        }
    }
    Ok(vectors)
}

/// Basis of the trivial `sp(2)` component at degree `m`, weight `w`.
pub fn trivial_basis(m: usize, w: i32, algebra: Algebra, relative: bool) -> Result<InvariantBasis> {
    trivial_basis_with(m, w, algebra, relative, &Budget::unlimited())
}

pub fn trivial_basis_with(m: usize, w: i32, algebra: Algebra, relative: bool, budget: &Budget) -> Result<InvariantBasis> {
    let shapes = enumerate_shapes(m, w, algebra, relative);
    let blocks = shapes
        .par_iter()
        .map(|s| shape_invariants(s, budget))
        .collect::<Result<Vec<_>>>()?;
    InvariantBasis::from_vectors(algebra, relative, m, w, blocks.into_iter().flatten().collect())
}

/// Weight-count oracle for the trivial multiplicity: `m_0 - m_2`, where
/// `m_lambda` is the number of ambient words of `H`-eigenvalue `lambda`.
pub fn character_multiplicity(m: usize, w: i32, algebra: Algebra, relative: bool) -> u64 {
    enumerate_shapes(m, w, algebra, relative).iter().map(shape_character_multiplicity).sum()
}

pub fn shape_character_multiplicity(shape: &Shape) -> u64 {
    let (mut m0, mut m2) = (0u64, 0u64);
    for w in wedge_basis(shape) {
        match w.h_eigenvalue() {
            0 => m0 += 1,
            2 => m2 += 1,
            _ => {}
        }
    }
    m0 - m2
}

/// True if `v` is killed by `E`, `H` and `F`.
pub fn is_invariant(v: &CochainVector) -> bool {
    Sl2Generator::ALL.iter().all(|&g| act(g, v).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::omega;
    use crate::polyalg::MonomialDual;

    #[test]
    fn omega_is_invariant() {
        let b = GradedAmbientBasis::new(2, -2, Algebra::Ham, true);
        assert_eq!(b.len(), 1);
        let h = sl2_operator_matrix(Sl2Generator::H, &b).unwrap();
        assert!(h.is_zero());
        assert!(act(Sl2Generator::E, &omega()).is_zero());
        let t = trivial_basis(2, -2, Algebra::Ham, true).unwrap();
        assert_eq!(t.vectors(), &[omega()]);
    }

    #[test]
    fn h_is_diagonal_and_e_f_shift_by_two() {
        let b = GradedAmbientBasis::new(3, 2, Algebra::Ham, false);
        let h = sl2_operator_matrix(Sl2Generator::H, &b).unwrap();
        for (j, w) in b.words().iter().enumerate() {
            let col = h.column(j);
            let ev = w.h_eigenvalue();
            if ev == 0 {
                assert!(col.is_empty());
            } else {
                assert_eq!(col, &[(j, q(ev as i64))]);
            }
            let sum: i32 = w.factors().iter().map(MonomialDual::h_eigenvalue).sum();
            assert_eq!(sum, ev);
        }
        for (g, shift) in [(Sl2Generator::E, 2), (Sl2Generator::F, -2)] {
            let m = sl2_operator_matrix(g, &b).unwrap();
            for (j, w) in b.words().iter().enumerate() {
                for (i, _) in m.column(j) {
                    assert_eq!(b.words()[*i].h_eigenvalue(), w.h_eigenvalue() + shift);
                }
            }
        }
    }

    #[test]
    fn character_examples() {
        assert_eq!(shape_character_multiplicity(&Shape::new(vec![(3, 2)])), 1);
        assert_eq!(shape_character_multiplicity(&Shape::new(vec![(2, 2)])), 0);
    }

    #[test]
    fn bases_agree_with_character_count() {
        for w in [-2, 0, 2, 4, 6, 8] {
            for m in 0..=(w + 4) as usize {
                for algebra in [Algebra::Ham, Algebra::Ham0] {
                    for relative in [true, false] {
                        let b = trivial_basis(m, w, algebra, relative).unwrap();
                        assert_eq!(b.dim() as u64, character_multiplicity(m, w, algebra, relative), "m={m} w={w} {algebra}");
                        for v in b.vectors() {
                            assert!(is_invariant(v));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn expansion_recovers_coordinates() {
        let b = trivial_basis(4, 6, Algebra::Ham, true).unwrap();
        assert!(b.dim() >= 2);
        let coords = vec![(0, q(3)), (b.dim() - 1, crate::rational::q_frac(-1, 4))];
        let v = b.combine(&coords);
        assert_eq!(b.expand(&v).unwrap(), coords);
        let stray = CochainVector::from_word(b.vectors()[0].leading().unwrap().0.clone());
        if b.vectors()[0].len() > 1 {
            assert!(b.expand(&stray).is_err());
        }
    }

    #[test]
    fn basis_text_round_trip() {
        let b = trivial_basis(3, 4, Algebra::Ham, true).unwrap();
        let t = b.to_text();
        assert_eq!(InvariantBasis::from_text(&t).unwrap(), b);
        let broken = t.replacen("dim=", "dim=9", 1);
        assert!(InvariantBasis::from_text(&broken).is_err());
    }

    #[test]
    fn slice_budget_is_enforced() {
        let budget = Budget::unlimited().with_max_slice_words(1);
        assert!(matches!(
            trivial_basis_with(4, 6, Algebra::Ham, true, &budget),
            Err(Error::Budget(_))
        ));
    }
}
