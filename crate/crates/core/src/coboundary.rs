//! Coboundary operators and their matrices between invariant bases.
//!
//! On a single dual,
//! `d z[r,R] = -1/2 * sum_{A+B=R+2} <z[r,R], {z~[a,A], z~[b,B]}> z[a,A]^z[b,B]`
//! over ordered pairs with `A, B >= 1` (`d0`, on `ham`) or `A, B >= 2`
//! (`d1`, on `ham0`). It is extended to wedge words as a graded derivation:
//! `d(u ^ v) = du ^ v + (-1)^{deg u} u ^ dv`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::cochain::{normalize, Algebra, CochainVector, WedgeWord};
use crate::error::{Error, Result};
use crate::invariants::{act_on_word, InvariantBasis};
use crate::linformgb::SparseMatrix;
use crate::polyalg::{bracket_coeff, MonomialDual, Sl2Generator};
use crate::rational::{q, q_frac, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Operator {
    /// Coboundary of `ham`.
    D0,
    /// Coboundary of `ham0`.
    D1,
}

impl Operator {
    pub fn for_algebra(a: Algebra) -> Self {
        match a {
            Algebra::Ham => Operator::D0,
            Algebra::Ham0 => Operator::D1,
        }
    }

    pub fn algebra(self) -> Algebra {
        match self {
            Operator::D0 => Algebra::Ham,
            Operator::D1 => Algebra::Ham0,
        }
    }

    fn min_part(self) -> u32 {
        self.algebra().min_part()
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Operator::D0 => "d0",
            Operator::D1 => "d1",
        })
    }
}

/// `d` on one dual, as canonical pairs `(c, z_a, z_b)` with `z_a < z_b`.
pub fn d_on_dual(op: Operator, z: MonomialDual) -> Result<Vec<(Q, MonomialDual, MonomialDual)>> {
    if z.degree() < op.min_part() {
        return Err(Error::Domain(format!("{op} is not defined on {z}")));
    }
    let big_r = z.degree();
    let r = z.r() as i64;
    let half = q_frac(-1, 2);
    let mut acc: BTreeMap<(MonomialDual, MonomialDual), Q> = BTreeMap::new();
    let lo = op.min_part();
    for big_a in lo..=(big_r + 2).saturating_sub(lo) {
        let big_b = big_r + 2 - big_a;
        if big_b < lo {
            continue;
        }
        for a in 0..=big_a {
            let b = r + 1 - a as i64;
            if b < 0 || b > big_b as i64 {
                continue;
            }
            let c = bracket_coeff(a, big_a, b as u32, big_b);
            if c == 0 {
                continue;
            }
            let za = MonomialDual::raw(a, big_a);
            let zb = MonomialDual::raw(b as u32, big_b);
            let Some((s, w)) = normalize(vec![za, zb]) else { continue };
            let f = w.factors();
            *acc.entry((f[0], f[1])).or_insert_with(Q::zero) += &half * q(c * s as i64);
        }
    }
    Ok(acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((x, y), c)| (c, x, y)).collect())
}

/// Lookup table of `d` on all duals up to a degree.
struct DualTable {
    op: Operator,
    table: HashMap<MonomialDual, Vec<(Q, MonomialDual, MonomialDual)>>,
    /// The same terms with coefficients doubled, which makes them integers.
    doubled: HashMap<MonomialDual, Vec<(i64, MonomialDual, MonomialDual)>>,
}

impl DualTable {
    fn new(op: Operator, max_degree: u32) -> Self {
        let mut table = HashMap::new();
        for big_r in op.min_part()..=max_degree {
            for r in 0..=big_r {
                let z = MonomialDual::raw(r, big_r);
                table.insert(z, d_on_dual(op, z).expect("degree checked"));
            }
        }
        let doubled = table
            .iter()
            .map(|(z, terms)| {
                let terms = terms
                    .iter()
                    .map(|(c, a, b)| {
                        let twice = c * q(2);
                        debug_assert!(twice.is_integer());
                        (twice.to_integer().to_i64().expect("small structure constant"), *a, *b)
                    })
                    .collect();
                (*z, terms)
            })
            .collect();
        DualTable { op, table, doubled }
    }

    fn apply_word(&self, word: &WedgeWord, c: &Q, out: &mut CochainVector) -> Result<()> {
        let f = word.factors();
        for (i, z) in f.iter().enumerate() {
            let terms = self
                .table
                .get(z)
                .ok_or_else(|| Error::Domain(format!("{} is not defined on {z} (in {word})", self.op)))?;
            for (k, za, zb) in terms {
                let mut nf = Vec::with_capacity(f.len() + 1);
                nf.extend_from_slice(&f[..i]);
                nf.push(*za);
                nf.push(*zb);
                nf.extend_from_slice(&f[i + 1..]);
                if let Some((s, w)) = normalize(nf) {
                    let sign = if i % 2 == 0 { s } else { -s };
                    let t = c * k;
                    out.add_term(w, if sign < 0 { -t } else { t });
                }
            }
        }
        Ok(())
    }
}

/// Coordinates of `d v` in `target` using checked integer arithmetic on
/// `2 L d(v)`, `L` the common denominator of `v`. Membership in the target
/// span is certified without touching the target vectors: `d v` must have
/// only admissible words and be killed by `E`, and the target basis spans
/// every such cochain. `Ok(None)` means an overflow; use the rational path.
fn integer_column(table: &DualTable, v: &CochainVector, target: &InvariantBasis, leads: &HashMap<&WedgeWord, usize>) -> Result<Option<Vec<(usize, Q)>>> {
    let l = v.terms().fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()));
    let mut image: HashMap<WedgeWord, i128> = HashMap::new();
    for (w, c) in v.terms() {
        let Some(n) = (c.numer() * (&l / c.denom())).to_i128() else { return Ok(None) };
        let f = w.factors();
        for (i, z) in f.iter().enumerate() {
            let terms = table
                .doubled
                .get(z)
                .ok_or_else(|| Error::Domain(format!("{} is not defined on {z} (in {w})", table.op)))?;
            for (k, za, zb) in terms {
                let mut nf = Vec::with_capacity(f.len() + 1);
                nf.extend_from_slice(&f[..i]);
                nf.push(*za);
                nf.push(*zb);
                nf.extend_from_slice(&f[i + 1..]);
                if let Some((s, word)) = normalize(nf) {
                    let sign = if i % 2 == 0 { s } else { -s } as i128;
                    let Some(t) = n.checked_mul(*k as i128 * sign) else { return Ok(None) };
                    let e = image.entry(word).or_insert(0);
                    let Some(x) = e.checked_add(t) else { return Ok(None) };
                    *e = x;
                }
            }
        }
    }
    image.retain(|_, c| *c != 0);

    let mut lowered: HashMap<WedgeWord, i128> = HashMap::new();
    for (w, c) in &image {
        let sh = w.shape();
        if w.h_eigenvalue() != 0
            || (target.algebra == Algebra::Ham0 && sh.multiplicity(1) > 0)
            || (target.relative && sh.multiplicity(2) > 0)
        {
            return Err(Error::Consistency(format!("d produced the inadmissible word {w}")));
        }
        for (k, t) in act_on_word(Sl2Generator::E, w) {
            let Some(x) = c.checked_mul(k as i128) else { return Ok(None) };
            let e = lowered.entry(t).or_insert(0);
            let Some(y) = e.checked_add(x) else { return Ok(None) };
            *e = y;
        }
    }
    if let Some((w, _)) = lowered.iter().find(|(_, c)| **c != 0) {
        return Err(Error::Consistency(format!("d v is not invariant (E d v has {w})")));
    }

    let denom = BigInt::from(2) * l;
    let mut coords: Vec<(usize, Q)> = image
        .iter()
        .filter_map(|(w, c)| leads.get(w).map(|&i| (i, Q::new(BigInt::from(*c), denom.clone()))))
        .collect();
    coords.sort_by_key(|(i, _)| *i);
    Ok(Some(coords))
}

fn max_factor_degree(v: &CochainVector) -> u32 {
    v.terms().flat_map(|(w, _)| w.factors().iter().map(|z| z.degree())).max().unwrap_or(0)
}

/// `d v`, tagged `(m+1, w)`.
pub fn apply_d(v: &CochainVector, op: Operator) -> Result<CochainVector> {
    let table = DualTable::new(op, max_factor_degree(v));
    apply_with(&table, v)
}

fn apply_with(table: &DualTable, v: &CochainVector) -> Result<CochainVector> {
    let mut out = CochainVector::zero(v.degree() + 1, v.weight());
    for (w, c) in v.terms() {
        table.apply_word(w, c, &mut out)?;
    }
    Ok(out)
}

/// Matrix of `d` from `source` (degree `m`) to `target` (degree `m+1`):
/// column `j` holds the coordinates of `d(v_j)` in the target basis.
#[derive(Clone, Debug)]
pub struct CoboundaryMatrix {
    pub op: Operator,
    pub source: Arc<InvariantBasis>,
    pub target: Arc<InvariantBasis>,
    pub matrix: SparseMatrix,
}

pub fn coboundary_matrix(source: Arc<InvariantBasis>, target: Arc<InvariantBasis>, op: Operator) -> Result<CoboundaryMatrix> {
    coboundary_matrix_with(source, target, op, &Budget::unlimited())
}

pub fn coboundary_matrix_with(
    source: Arc<InvariantBasis>,
    target: Arc<InvariantBasis>,
    op: Operator,
    budget: &Budget,
) -> Result<CoboundaryMatrix> {
    if source.algebra != op.algebra() || target.algebra != op.algebra() {
        return Err(Error::Domain(format!("{op} acts on {} cochains", op.algebra())));
    }
    if target.degree != source.degree + 1 || target.weight != source.weight || target.relative != source.relative {
        return Err(Error::Domain(format!(
            "target ({}, {}) is not the successor of source ({}, {})",
            target.degree, target.weight, source.degree, source.weight
        )));
    }
    let max_deg = source.vectors().iter().map(max_factor_degree).max().unwrap_or(0);
    let table = DualTable::new(op, max_deg);
    let leads: HashMap<&WedgeWord, usize> = target.leading_words().iter().enumerate().map(|(i, w)| (w, i)).collect();
    let columns = source
        .vectors()
        .par_iter()
        .enumerate()
        .map(|(j, v)| {
            budget.check_time(&format!("column {} of {op}", j + 1))?;
            if let Some(col) = integer_column(&table, v, &target, &leads)? {
                return Ok(col);
            }
            let image = apply_with(&table, v)?;
            target.expand(&image).map_err(|e| {
                Error::Consistency(format!(
                    "{op} of basis vector {} at (m={}, w={}): {e}",
                    j + 1,
                    source.degree,
                    source.weight
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CoboundaryMatrix {
        op,
        matrix: SparseMatrix::from_columns(target.dim(), columns),
        source,
        target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::{omega, wedge};
    use crate::invariants::{act, trivial_basis, GradedAmbientBasis};

    fn z(r: u32, big_r: u32) -> MonomialDual {
        MonomialDual::raw(r, big_r)
    }

    fn word(f: &[MonomialDual]) -> CochainVector {
        CochainVector::from_factors(f)
    }

    #[test]
    fn integer_columns_match_rational_expansion() {
        for (alg, rel, m, w) in [(Algebra::Ham, true, 4, 10), (Algebra::Ham0, true, 5, 12), (Algebra::Ham, false, 3, 8)] {
            let src = trivial_basis(m, w, alg, rel).unwrap();
            let tgt = trivial_basis(m + 1, w, alg, rel).unwrap();
            let op = Operator::for_algebra(alg);
            let table = DualTable::new(op, (w + 2) as u32);
            let leads: HashMap<&WedgeWord, usize> = tgt.leading_words().iter().enumerate().map(|(i, w)| (w, i)).collect();
            for v in src.vectors() {
                let fast = integer_column(&table, v, &tgt, &leads).unwrap().unwrap();
                assert_eq!(fast, tgt.expand(&apply_with(&table, v).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn non_invariant_images_are_rejected() {
        let tgt = trivial_basis(3, 2, Algebra::Ham, true).unwrap();
        let table = DualTable::new(Operator::D0, 4);
        let leads = HashMap::new();
        // a lone word is not sl2-invariant, so neither is its coboundary
        let v = word(&[z(1, 2), z(0, 1)]).scaled(&q(3));
        let res = integer_column(&table, &v, &tgt, &leads);
        assert!(matches!(res, Err(Error::Consistency(_))) || apply_d(&v, Operator::D0).unwrap().is_zero());
    }

    #[test]
    fn d0_omega_vanishes() {
        assert!(apply_d(&omega(), Operator::D0).unwrap().is_zero());
    }

    #[test]
    fn difference_of_operators_is_a_determinant() {
        for big_r in 2..=8 {
            for r in 0..=big_r {
                let v = word(&[z(r, big_r)]);
                let mut diff = apply_d(&v, Operator::D0).unwrap();
                diff.add_scaled(&apply_d(&v, Operator::D1).unwrap(), &q(-1));
                let mut expect = word(&[z(0, 1), z(1 + r, 1 + big_r)]);
                expect.add_scaled(&word(&[z(1, 1), z(r, 1 + big_r)]), &q(-1));
                assert_eq!(diff, expect, "z[{r},{big_r}]");
            }
        }
    }

    #[test]
    fn d1_spot_values() {
        // only A = B = 2 contributes; {x^2/2, y^2/2} = xy
        let d = apply_d(&word(&[z(1, 2)]), Operator::D1).unwrap();
        assert_eq!(d, word(&[z(0, 2), z(2, 2)]).scaled(&q(1)));
        assert!(apply_d(&word(&[z(0, 1), z(0, 3)]), Operator::D1).is_err());
        // degree-1 duals only see the A+B=3 splits under d0
        let d = apply_d(&word(&[z(0, 1)]), Operator::D0).unwrap();
        let mut expect = word(&[z(0, 1), z(1, 2)]);
        expect.add_scaled(&word(&[z(1, 1), z(0, 2)]), &q(-1));
        assert_eq!(d, expect);
    }

    #[test]
    fn d_squared_vanishes_on_words() {
        for op in [Operator::D0, Operator::D1] {
            for w in -2..=4 {
                for m in 1..=3 {
                    let b = GradedAmbientBasis::new(m, w, op.algebra(), false);
                    for wd in b.words() {
                        let v = CochainVector::from_word(wd.clone());
                        let dd = apply_d(&apply_d(&v, op).unwrap(), op).unwrap();
                        assert!(dd.is_zero(), "{op} twice on {wd}");
                    }
                }
            }
        }
    }

    #[test]
    fn d_commutes_with_sl2() {
        for op in [Operator::D0, Operator::D1] {
            for w in 0..=8 {
                for m in 1..=4 {
                    let b = GradedAmbientBasis::new(m, w, op.algebra(), false);
                    for wd in b.words().iter().step_by(7) {
                        let v = CochainVector::from_word(wd.clone());
                        for g in [Sl2Generator::E, Sl2Generator::F] {
                            let lhs = act(g, &apply_d(&v, op).unwrap());
                            let rhs = apply_d(&act(g, &v), op).unwrap();
                            assert_eq!(lhs, rhs, "{op} {g:?} on {wd}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn omega_wedge_intertwines() {
        for w in [4, 6, 8] {
            for m in 1..=5 {
                let b = trivial_basis(m, w, Algebra::Ham0, true).unwrap();
                for v in b.vectors() {
                    let lhs = apply_d(&wedge(&omega(), v), Operator::D0).unwrap();
                    let rhs = wedge(&omega(), &apply_d(v, Operator::D1).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn invariant_matrices_compose_to_zero() {
        for (alg, w) in [(Algebra::Ham, 4), (Algebra::Ham0, 6), (Algebra::Ham, 6)] {
            let op = Operator::for_algebra(alg);
            let bases: Vec<_> = (0..=w as usize + 4).map(|m| Arc::new(trivial_basis(m, w, alg, true).unwrap())).collect();
            let mats: Vec<_> = bases
                .windows(2)
                .map(|p| coboundary_matrix(p[0].clone(), p[1].clone(), op).unwrap())
                .collect();
            for p in mats.windows(2) {
                assert!(p[1].matrix.mul(&p[0].matrix).is_zero());
            }
        }
    }

    #[test]
    fn weight_is_preserved() {
        let v = word(&[z(1, 3), z(2, 5)]);
        let d = apply_d(&v, Operator::D1).unwrap();
        assert!(d.terms().all(|(w, _)| w.weight() == v.weight() && w.degree() == 3));
    }

    #[test]
    fn mismatched_bases_are_rejected() {
        let a = Arc::new(trivial_basis(2, 4, Algebra::Ham, true).unwrap());
        let b = Arc::new(trivial_basis(4, 4, Algebra::Ham, true).unwrap());
        assert!(coboundary_matrix(a.clone(), b, Operator::D0).is_err());
        let c = Arc::new(trivial_basis(3, 4, Algebra::Ham, true).unwrap());
        assert!(coboundary_matrix(a, c, Operator::D1).is_err());
    }
}
