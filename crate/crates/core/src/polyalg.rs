//! Divided-power monomials on the symplectic plane and their duals.
//!
//! A homogeneous polynomial of degree `R` is expanded in the basis
//! `x^r/r! * y^(R-r)/(R-r)!` (`0 <= r <= R`); [`MonomialDual`] `z[r,R]` is the
//! dual functional. The Poisson bracket `{f,g} = f_x g_y - f_y g_x` closes on
//! this basis with integer structure constants, which makes the whole complex
//! integral before the invariant extraction step.

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{q, Q};

/// Dual basis element `z[r,R]` of the divided-power monomial of bidegree
/// `(r, R-r)`. Ordered by `(R, r)`, which is the canonical factor order of
/// wedge words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialDual {
    degree: u16,
    r: u16,
}

impl MonomialDual {
    pub fn new(r: u32, degree: u32) -> Result<Self> {
        if degree == 0 || r > degree || degree > u16::MAX as u32 {
            return Err(Error::Domain(format!("z[{r},{degree}] needs R >= 1 and 0 <= r <= R")));
        }
        Ok(Self::raw(r, degree))
    }

    #[inline]
    pub(crate) const fn raw(r: u32, degree: u32) -> Self {
        MonomialDual {
            degree: degree as u16,
            r: r as u16,
        }
    }

    #[inline]
    pub fn r(&self) -> u32 {
        self.r as u32
    }

    /// Total homogeneous degree `R` of the dual polynomial.
    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree as u32
    }

    /// Grading weight `R - 2`.
    #[inline]
    pub fn weight(&self) -> i32 {
        self.degree as i32 - 2
    }

    /// Eigenvalue of the Cartan element `H` on this dual, `R - 2r`.
    #[inline]
    pub fn h_eigenvalue(&self) -> i32 {
        self.degree as i32 - 2 * self.r as i32
    }
}

impl fmt::Display for MonomialDual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z[{},{}]", self.r, self.degree)
    }
}

/// One term `coeff * z~[r,R]` of a Poisson bracket.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketTerm {
    pub coeff: Q,
    pub r: u32,
    pub degree: u32,
}

pub(crate) fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as i64
}

/// Structure constant `c` in `{z~[a,A], z~[b,B]} = c * z~[a+b-1, A+B-2]`.
///
/// `f_x g_y` contributes `C(a+b-1, a-1) C(A+B-a-b-1, A-a)` and `f_y g_x`
/// contributes `C(a+b-1, a) C(A+B-a-b-1, A-a-1)`; both come from multiplying
/// two divided powers. Indices are not validated here.
#[inline]
pub(crate) fn bracket_coeff(a: u32, big_a: u32, b: u32, big_b: u32) -> i64 {
    let (a, aa, b, bb) = (a as i64, big_a as i64, b as i64, big_b as i64);
    let x = a + b - 1;
    let y = aa + bb - a - b - 1;
    if x < 0 || y < 0 {
        return 0;
    }
    let mut c = 0;
    if a >= 1 && bb - b >= 1 {
        c += binom(x, a - 1) * binom(y, aa - a);
    }
    if aa - a >= 1 && b >= 1 {
        c -= binom(x, a) * binom(y, aa - a - 1);
    }
    c
}

/// Poisson bracket of two divided-power monomials.
///
/// Returns `None` when the bracket vanishes or is a constant (degree 0), which
/// is zero as an element of the positive-degree bracket image.
pub fn poisson_bracket(a: u32, big_a: u32, b: u32, big_b: u32) -> Result<Option<BracketTerm>> {
    if big_a < 1 || big_b < 1 || a > big_a || b > big_b {
        return Err(Error::Domain(format!(
            "bracket of z~[{a},{big_a}] and z~[{b},{big_b}] is malformed"
        )));
    }
    let degree = big_a + big_b - 2;
    if degree == 0 {
        return Ok(None);
    }
    let c = bracket_coeff(a, big_a, b, big_b);
    if c == 0 {
        return Ok(None);
    }
    Ok(Some(BracketTerm {
        coeff: q(c),
        r: a + b - 1,
        degree,
    }))
}

/// Kronecker pairing `<z[r,R], z~[a,A]>`.
pub fn pairing(z: MonomialDual, a: u32, big_a: u32) -> Q {
    if z.r() == a && z.degree() == big_a {
        q(1)
    } else {
        q(0)
    }
}

/// Standard generators of `sp(2) = sl(2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sl2Generator {
    E,
    H,
    F,
}

impl Sl2Generator {
    pub const ALL: [Sl2Generator; 3] = [Sl2Generator::E, Sl2Generator::H, Sl2Generator::F];

    /// Index `r` of the quadratic Hamiltonian `z~[r,2]` realizing the
    /// generator: `E = x^2/2`, `H = xy`, `F = y^2/2`.
    pub fn hamiltonian_index(self) -> u32 {
        match self {
            Sl2Generator::E => 2,
            Sl2Generator::H => 1,
            Sl2Generator::F => 0,
        }
    }

    /// Sign `s` in the embedding `g -> s * hamiltonian(g)` into the Poisson
    /// algebra. With `{x,y} = 1` we get `{xy, x^2/2} = -x^2`, so `H` and `F`
    /// must be negated for `[H,E] = 2E`, `[H,F] = -2F`, `[E,F] = H`.
    pub const fn embedding_sign(self) -> i64 {
        match self {
            Sl2Generator::E => 1,
            Sl2Generator::H => -1,
            Sl2Generator::F => -1,
        }
    }
}

/// Sign of the `H`-eigenvalue on `z[r,R]` relative to `R - 2r` under the
/// fixed embedding. Checked by [`check_sl2_relations`].
pub const H_EIGEN_SIGN: i32 = 1;

/// Coadjoint action on a dual: `<g.z, z~> = -<z, {s*J(g), z~}>`. The result
/// is a single monomial (or zero) since each generator is homogeneous in
/// the `x`-exponent.
#[inline]
pub(crate) fn sl2_on_dual_int(g: Sl2Generator, z: MonomialDual) -> Option<(i64, MonomialDual)> {
    let qa = g.hamiltonian_index() as i64;
    // {z~[qa,2], z~[a,R]} lands on index qa + a - 1; solve for a = r + 1 - qa.
    let a = z.r() as i64 + 1 - qa;
    if a < 0 || a > z.degree() as i64 {
        return None;
    }
    let c = -g.embedding_sign() * bracket_coeff(qa as u32, 2, a as u32, z.degree());
    if c == 0 {
        None
    } else {
        Some((c, MonomialDual::raw(a as u32, z.degree())))
    }
}

/// The `sl(2)` action on a single dual basis element.
pub fn sl2_on_dual(g: Sl2Generator, z: MonomialDual) -> Vec<(Q, MonomialDual)> {
    sl2_on_dual_int(g, z)
        .map(|(c, t)| vec![(q(c), t)])
        .unwrap_or_default()
}

/// Verifies `[H,E] = 2E`, `[H,F] = -2F`, `[E,F] = H` on every `z[r,R]` with
/// `R <= max_degree`, and that `H` has eigenvalue `H_EIGEN_SIGN * (R - 2r)`.
pub fn check_sl2_relations(max_degree: u32) -> Result<()> {
    use std::collections::BTreeMap;
    use Sl2Generator::*;

    type Vec1 = BTreeMap<MonomialDual, i64>;
    let act = |g: Sl2Generator, v: &Vec1| -> Vec1 {
        let mut out = Vec1::new();
        for (z, c) in v {
            if let Some((k, t)) = sl2_on_dual_int(g, *z) {
                *out.entry(t).or_insert(0) += c * k;
            }
        }
        out.retain(|_, c| *c != 0);
        out
    };
    let comm = |x: Sl2Generator, y: Sl2Generator, v: &Vec1| -> Vec1 {
        let mut out = act(x, &act(y, v));
        for (z, c) in act(y, &act(x, v)) {
            *out.entry(z).or_insert(0) -= c;
        }
        out.retain(|_, c| *c != 0);
        out
    };
    let scaled = |s: i64, v: Vec1| -> Vec1 { v.into_iter().map(|(z, c)| (z, s * c)).filter(|(_, c)| *c != 0).collect() };

    for big_r in 1..=max_degree {
        for r in 0..=big_r {
            let z = MonomialDual::raw(r, big_r);
            let v: Vec1 = [(z, 1)].into_iter().collect();
            let h = act(H, &v);
            let expect_h = H_EIGEN_SIGN as i64 * z.h_eigenvalue() as i64;
            if h != scaled(expect_h, v.clone()) {
                return Err(Error::Consistency(format!("H eigenvalue on {z}")));
            }
            let checks = [
                (comm(H, E, &v), scaled(2, act(E, &v)), "[H,E]=2E"),
                (comm(H, F, &v), scaled(-2, act(F, &v)), "[H,F]=-2F"),
                (comm(E, F, &v), act(H, &v), "[E,F]=H"),
            ];
            for (lhs, rhs, name) in checks {
                if lhs != rhs {
                    return Err(Error::Consistency(format!("{name} fails on {z}")));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_frac;
    use num_traits::Zero;
    use std::collections::BTreeMap;

    /// Polynomial in x, y as exponent pair -> coefficient.
    type Poly = BTreeMap<(u32, u32), Q>;

    fn factorial(n: u32) -> Q {
        (1..=n as i64).fold(q(1), |acc, k| acc * q(k))
    }

    fn divided_power(a: u32, big_a: u32) -> Poly {
        let c = q(1) / (factorial(a) * factorial(big_a - a));
        [((a, big_a - a), c)].into_iter().collect()
    }

    fn dx(p: &Poly) -> Poly {
        p.iter()
            .filter(|((i, _), _)| *i > 0)
            .map(|((i, j), c)| ((i - 1, *j), c * q(*i as i64)))
            .collect()
    }

    fn dy(p: &Poly) -> Poly {
        p.iter()
            .filter(|((_, j), _)| *j > 0)
            .map(|((i, j), c)| ((*i, j - 1), c * q(*j as i64)))
            .collect()
    }

    fn mul(p: &Poly, r: &Poly) -> Poly {
        let mut out = Poly::new();
        for ((i1, j1), c1) in p {
            for ((i2, j2), c2) in r {
                *out.entry((i1 + i2, j1 + j2)).or_insert_with(Q::zero) += c1 * c2;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    fn sub(p: &Poly, r: &Poly) -> Poly {
        let mut out = p.clone();
        for (k, c) in r {
            *out.entry(*k).or_insert_with(Q::zero) -= c;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Symbolic `{f,g} = f_x g_y - f_y g_x`, re-expressed in divided powers.
    fn oracle_bracket(a: u32, big_a: u32, b: u32, big_b: u32) -> Option<(Q, u32, u32)> {
        let f = divided_power(a, big_a);
        let g = divided_power(b, big_b);
        let p = sub(&mul(&dx(&f), &dy(&g)), &mul(&dy(&f), &dx(&g)));
        assert!(p.len() <= 1);
        let ((i, j), c) = p.into_iter().next()?;
        if i + j == 0 {
            return None;
        }
        // c x^i y^j = c i! j! z~[i, i+j]
        Some((c * factorial(i) * factorial(j), i, i + j))
    }

    #[test]
    fn bracket_matches_symbolic_oracle() {
        for big_a in 1..=11 {
            for big_b in 1..=(12 - big_a) {
                for a in 0..=big_a {
                    for b in 0..=big_b {
                        let got = poisson_bracket(a, big_a, b, big_b)
                            .unwrap()
                            .map(|t| (t.coeff, t.r, t.degree));
                        assert_eq!(got, oracle_bracket(a, big_a, b, big_b), "({a},{big_a},{b},{big_b})");
                    }
                }
            }
        }
    }

    #[test]
    fn bracket_examples() {
        let t = poisson_bracket(2, 2, 0, 2).unwrap().unwrap();
        assert_eq!((t.coeff, t.r, t.degree), (q(1), 1, 2));
        let t = poisson_bracket(0, 2, 2, 2).unwrap().unwrap();
        assert_eq!((t.coeff, t.r, t.degree), (q(-1), 1, 2));
        assert_eq!(poisson_bracket(1, 1, 0, 1).unwrap(), None);
        assert_eq!(poisson_bracket(0, 3, 0, 4).unwrap(), None);
        assert!(poisson_bracket(3, 2, 0, 2).is_err());
        assert!(poisson_bracket(0, 0, 0, 2).is_err());
    }

    #[test]
    fn bracket_antisymmetric() {
        for big_a in 1..=11 {
            for big_b in 1..=(12 - big_a) {
                for a in 0..=big_a {
                    for b in 0..=big_b {
                        assert_eq!(bracket_coeff(a, big_a, b, big_b), -bracket_coeff(b, big_b, a, big_a));
                    }
                }
            }
        }
    }

    fn nested(f: (u32, u32), g: (u32, u32), h: (u32, u32)) -> Option<(Q, u32, u32)> {
        let inner = poisson_bracket(f.0, f.1, g.0, g.1).unwrap()?;
        let outer = poisson_bracket(inner.r, inner.degree, h.0, h.1).unwrap()?;
        Some((inner.coeff * outer.coeff, outer.r, outer.degree))
    }

    #[test]
    fn jacobi_identity() {
        let mut monos = Vec::new();
        for d in 1..=8u32 {
            for r in 0..=d {
                monos.push((r, d));
            }
        }
        for &f in &monos {
            for &g in &monos {
                for &h in &monos {
                    if f.1 + g.1 + h.1 > 10 {
                        continue;
                    }
                    let mut sum: BTreeMap<(u32, u32), Q> = BTreeMap::new();
                    for t in [nested(f, g, h), nested(g, h, f), nested(h, f, g)].into_iter().flatten() {
                        *sum.entry((t.1, t.2)).or_insert_with(Q::zero) += t.0;
                    }
                    assert!(sum.values().all(|c| c.is_zero()), "{f:?} {g:?} {h:?}");
                }
            }
        }
    }

    #[test]
    fn grading_is_additive() {
        let t = poisson_bracket(1, 4, 2, 5).unwrap().unwrap();
        assert_eq!(t.degree, 7);
        let w = |d: u32| d as i32 - 2;
        assert_eq!(w(4) + w(5), w(t.degree));
        assert_eq!((4 - 2) + (5 - 2), (4 + 5 - 2) - 2);
    }

    #[test]
    fn pairing_is_kronecker() {
        let z = MonomialDual::new(1, 2).unwrap();
        assert_eq!(pairing(z, 1, 2), q(1));
        assert_eq!(pairing(z, 0, 2), q(0));
        assert_eq!(pairing(MonomialDual::new(0, 5).unwrap(), 0, 4), q(0));
    }

    #[test]
    fn sl2_relations_hold() {
        check_sl2_relations(10).unwrap();
    }

    #[test]
    fn sl2_strings_terminate() {
        for big_r in 1..=8u32 {
            for r in 0..=big_r {
                let mut v = vec![(q(1), MonomialDual::raw(r, big_r))];
                for _ in 0..=big_r {
                    v = v.into_iter().flat_map(|(c, z)| sl2_on_dual(Sl2Generator::E, z).into_iter().map(move |(k, t)| (&c * k, t))).collect();
                }
                assert!(v.is_empty());
            }
            assert!(sl2_on_dual(Sl2Generator::F, MonomialDual::raw(big_r, big_r)).is_empty());
            assert!(sl2_on_dual(Sl2Generator::E, MonomialDual::raw(0, big_r)).is_empty());
        }
        let h = sl2_on_dual(Sl2Generator::H, MonomialDual::raw(1, 5));
        assert_eq!(h, vec![(q(3), MonomialDual::raw(1, 5))]);
        let _ = q_frac(1, 2);
    }

    #[test]
    fn dual_ordering_is_degree_then_index() {
        let mut v = vec![MonomialDual::raw(0, 3), MonomialDual::raw(1, 1), MonomialDual::raw(0, 1)];
        v.sort();
        assert_eq!(v, vec![MonomialDual::raw(0, 1), MonomialDual::raw(1, 1), MonomialDual::raw(0, 3)]);
        assert!(MonomialDual::new(3, 2).is_err());
        assert_eq!(MonomialDual::raw(2, 7).to_string(), "z[2,7]");
    }
}
