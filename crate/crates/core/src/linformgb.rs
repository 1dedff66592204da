//! Gröbner bases of linear homogeneous forms.
//!
//! For linear forms a reduced Gröbner basis under the order
//! `y_1 > y_2 > ... > y_mu` is exactly the reduced row-echelon form of the
//! coefficient matrix, and the normal form is reduction against its pivots.
//! Everything here is therefore exact sparse Gaussian elimination over the
//! rationals; the Gröbner vocabulary is kept in the names.
//!
//! Variables are 0-based internally and printed 1-based (`y1`, `y2`, ...).

use std::fmt::{self, Write as _};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::modp::{multimodular, ModEchelon, QRows, Zp};
use crate::rational::{parse_q, Q};

/// Sparse linear form `sum c_i y_i`, terms sorted by variable index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    nvars: usize,
    terms: Vec<(usize, Q)>,
}

impl LinearForm {
    pub fn zero(nvars: usize) -> Self {
        LinearForm { nvars, terms: Vec::new() }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        LinearForm {
            nvars,
            terms: vec![(i, Q::one())],
        }
    }

    /// Builds a form from arbitrary `(var, coeff)` pairs; duplicates are summed.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (usize, Q)>) -> Self {
        let mut t: Vec<(usize, Q)> = terms.into_iter().collect();
        t.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, Q)> = Vec::with_capacity(t.len());
        for (i, c) in t {
            assert!(i < nvars, "variable {i} out of range {nvars}");
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc += c,
                _ => out.push((i, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        LinearForm { nvars, terms: out }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(usize, Q)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Leading variable: the smallest index, i.e. the largest in `y_1 > y_2 > ...`.
    pub fn leading(&self) -> Option<(usize, &Q)> {
        self.terms.first().map(|(i, c)| (*i, c))
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.terms
            .binary_search_by_key(&i, |(j, _)| *j)
            .map(|k| self.terms[k].1.clone())
            .unwrap_or_else(|_| Q::zero())
    }

    fn coeff_ref(&self, i: usize) -> Option<&Q> {
        self.terms.binary_search_by_key(&i, |(j, _)| *j).ok().map(|k| &self.terms[k].1)
    }

    /// `self -= c * other`.
    pub fn sub_scaled(&mut self, other: &LinearForm, c: &Q) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = std::mem::take(&mut self.terms).into_iter().peekable();
        let mut b = other.terms.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, _)), Some((j, _))) if i < j => out.push(a.next().unwrap()),
                (Some((i, _)), Some((j, _))) if i > j => {
                    let (j, v) = b.next().unwrap();
                    out.push((*j, -(v * c)));
                }
                (Some(_), Some(_)) => {
                    let (i, x) = a.next().unwrap();
                    let (_, v) = b.next().unwrap();
                    let y = x - v * c;
                    if !y.is_zero() {
                        out.push((i, y));
                    }
                }
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (j, v) = b.next().unwrap();
                    out.push((*j, -(v * c)));
                }
                (None, None) => break,
            }
        }
        self.terms = out;
    }

    pub fn scale(&mut self, c: &Q) {
        if c.is_zero() {
            self.terms.clear();
        } else {
            for (_, x) in &mut self.terms {
                *x *= c;
            }
        }
    }

    fn make_monic(&mut self) {
        if let Some((_, lc)) = self.terms.first() {
            if !lc.is_one() {
                let inv = lc.recip();
                self.scale(&inv);
            }
        }
    }

    /// Evaluates the form at a point given as a dense coordinate vector.
    pub fn eval(&self, point: &[Q]) -> Q {
        self.terms.iter().fold(Q::zero(), |acc, (i, c)| acc + c * &point[*i])
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (i, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*y{}", i + 1)?;
        }
        Ok(())
    }
}

/// Parses the `p/q*y<i> + ...` form syntax.
pub fn parse_form(s: &str, nvars: usize, line: usize) -> Result<LinearForm> {
    let s = s.trim();
    if s == "0" {
        return Ok(LinearForm::zero(nvars));
    }
    let mut terms = Vec::new();
    for t in s.split(" + ") {
        let (c, v) = t
            .trim()
            .split_once("*y")
            .ok_or_else(|| Error::parse(line, format!("expected `c*y<i>`, got `{t}`")))?;
        let c = parse_q(c).ok_or_else(|| Error::parse(line, format!("bad coefficient `{c}`")))?;
        let i: usize = v.trim().parse().map_err(|_| Error::parse(line, format!("bad variable `y{v}`")))?;
        if i == 0 || i > nvars {
            return Err(Error::parse(line, format!("variable y{i} outside 1..={nvars}")));
        }
        terms.push((i - 1, c));
    }
    Ok(LinearForm::from_terms(nvars, terms))
}

/// Reduced, monic row-echelon basis ("reduced Gröbner basis" of linear forms).
///
/// Forms are sorted by leading variable; every leading variable is absent
/// from all other forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EchelonBasis {
    nvars: usize,
    forms: Vec<LinearForm>,
}

impl EchelonBasis {
    pub fn empty(nvars: usize) -> Self {
        EchelonBasis { nvars, forms: Vec::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn leading_vars(&self) -> Vec<usize> {
        self.forms.iter().map(|f| f.leading().unwrap().0).collect()
    }

    fn pivot_of(&self, var: usize) -> Option<&LinearForm> {
        self.forms
            .binary_search_by_key(&var, |f| f.leading().unwrap().0)
            .ok()
            .map(|k| &self.forms[k])
    }

    /// Checks the defining invariants.
    pub fn validate(&self) -> Result<()> {
        let leads = self.leading_vars();
        if !leads.windows(2).all(|p| p[0] < p[1]) {
            return Err(Error::Consistency("leading variables not strictly ordered".into()));
        }
        for (k, f) in self.forms.iter().enumerate() {
            if !f.leading().unwrap().1.is_one() {
                return Err(Error::Consistency(format!("form {} not monic", k + 1)));
            }
            for (l, &p) in leads.iter().enumerate() {
                if l != k && f.coeff_ref(p).is_some() {
                    return Err(Error::Consistency(format!("form {} contains pivot y{}", k + 1, p + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("# echelon vars={} count={}\n", self.nvars, self.forms.len());
        for f in &self.forms {
            let _ = writeln!(s, "{f}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut nvars = None;
        let mut count = None;
        let mut forms = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let no = i + 1;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            if let Some(h) = t.strip_prefix("# echelon") {
                for kv in h.split_whitespace() {
                    match kv.split_once('=') {
                        Some(("vars", v)) => nvars = v.parse().ok(),
                        Some(("count", v)) => count = v.parse::<usize>().ok(),
                        _ => return Err(Error::parse(no, format!("bad header field `{kv}`"))),
                    }
                }
                continue;
            }
            if t.starts_with('#') {
                continue;
            }
            let n = nvars.ok_or_else(|| Error::parse(no, "missing `# echelon vars=..` header"))?;
            forms.push(parse_form(t, n, no)?);
        }
        let nvars = nvars.ok_or_else(|| Error::parse(1, "missing `# echelon vars=..` header"))?;
        if count.is_some_and(|c| c != forms.len()) {
            return Err(Error::parse(1, format!("header count {} but {} forms", count.unwrap(), forms.len())));
        }
        let b = EchelonBasis { nvars, forms };
        b.validate().map_err(|e| Error::parse(1, e.to_string()))?;
        Ok(b)
    }
}

/// Reduced echelon basis of the span of `forms`.
pub fn echelon(nvars: usize, forms: impl IntoIterator<Item = LinearForm>) -> EchelonBasis {
    let mut rows: Vec<LinearForm> = Vec::new();
    // pivot variable -> row index in `rows`
    let mut pivot_row: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    for f in forms {
        assert_eq!(f.nvars, nvars, "form over {} variables in a {nvars}-variable echelon", f.nvars);
        let mut f = f;
        // rows are fully reduced, so one pass over the original support suffices
        let hits: Vec<(usize, Q)> = f
            .terms
            .iter()
            .filter_map(|(v, c)| pivot_row.get(v).map(|&r| (r, c.clone())))
            .collect();
        for (r, c) in hits {
            f.sub_scaled(&rows[r], &c);
        }
        if f.is_zero() {
            continue;
        }
        f.make_monic();
        let p = f.terms[0].0;
        for row in rows.iter_mut() {
            if let Some(c) = row.coeff_ref(p).cloned() {
                row.sub_scaled(&f, &c);
            }
        }
        pivot_row.insert(p, rows.len());
        rows.push(f);
    }
    rows.sort_by_key(|f| f.terms[0].0);
    EchelonBasis { nvars, forms: rows }
}

/// Remainder of `h` modulo the span of `basis`, free of its leading variables.
pub fn normal_form(h: &LinearForm, basis: &EchelonBasis) -> LinearForm {
    assert_eq!(h.nvars, basis.nvars);
    let mut out = h.clone();
    for (v, c) in &h.terms {
        if let Some(p) = basis.pivot_of(*v) {
            out.sub_scaled(p, c);
        }
    }
    out
}

/// Column-major sparse rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, Q)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    /// Each column given as `(row, value)` pairs; zeros are dropped.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, Q)>>) -> Self {
        let cols = columns.len();
        let columns = columns
            .into_iter()
            .map(|c| LinearForm::from_terms(rows, c).terms)
            .collect();
        SparseMatrix { rows, cols, columns }
    }

    pub fn from_dense(rows: &[Vec<Q>]) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, Vec::len);
        let columns = (0..nc)
            .map(|j| (0..nr).filter(|&i| !rows[i][j].is_zero()).map(|i| (i, rows[i][j].clone())).collect())
            .collect();
        SparseMatrix { rows: nr, cols: nc, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn column(&self, j: usize) -> &[(usize, Q)] {
        &self.columns[j]
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.columns[j]
            .binary_search_by_key(&i, |(r, _)| *r)
            .map(|k| self.columns[j][k].1.clone())
            .unwrap_or_else(|_| Q::zero())
    }

    /// Columns as forms over the row variables: `[g_1..g_cols] = [y_1..y_rows] M`.
    pub fn column_forms(&self) -> Vec<LinearForm> {
        self.columns
            .iter()
            .map(|c| LinearForm {
                nvars: self.rows,
                terms: c.clone(),
            })
            .collect()
    }

    /// Rows as forms over the column variables: `[f_1..f_rows] = [c_1..c_cols] tN`.
    pub fn row_forms(&self) -> Vec<LinearForm> {
        let mut rows: Vec<Vec<(usize, Q)>> = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                rows[*i].push((j, v.clone()));
            }
        }
        rows.into_iter().map(|terms| LinearForm { nvars: self.cols, terms }).collect()
    }

    pub fn transpose(&self) -> SparseMatrix {
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            columns: self.row_forms().into_iter().map(|f| f.terms).collect(),
        }
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let columns = rhs
            .columns
            .iter()
            .map(|col| {
                let mut acc = LinearForm::zero(self.rows);
                for (k, v) in col {
                    let c = LinearForm {
                        nvars: self.rows,
                        terms: self.columns[*k].clone(),
                    };
                    acc.sub_scaled(&c, &-v.clone());
                }
                acc.terms
            })
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: rhs.cols,
            columns,
        }
    }

    /// Text format: header `rows cols nnz`, then `row col value` triples with
    /// 1-based indices, sorted by row then column.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, self.nnz());
        for (i, f) in self.row_forms().iter().enumerate() {
            for (j, v) in &f.terms {
                let _ = writeln!(s, "{} {} {}", i + 1, j + 1, v);
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });
        let (hno, header) = lines.next().ok_or_else(|| Error::parse(1, "empty matrix file"))?;
        let h: Vec<usize> = header
            .split_whitespace()
            .map(|x| x.parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::parse(hno + 1, "header must be `rows cols nnz`"))?;
        if h.len() != 3 {
            return Err(Error::parse(hno + 1, "header must be `rows cols nnz`"));
        }
        let (rows, cols, nnz) = (h[0], h[1], h[2]);
        let mut columns: Vec<Vec<(usize, Q)>> = vec![Vec::new(); cols];
        let mut seen = 0;
        for (i, line) in lines {
            let no = i + 1;
            let mut it = line.split_whitespace();
            let (r, c, v) = match (it.next(), it.next(), it.next(), it.next()) {
                (Some(r), Some(c), Some(v), None) => (r, c, v),
                _ => return Err(Error::parse(no, "expected `row col value`")),
            };
            let r: usize = r.parse().map_err(|_| Error::parse(no, "bad row index"))?;
            let c: usize = c.parse().map_err(|_| Error::parse(no, "bad column index"))?;
            if r == 0 || r > rows || c == 0 || c > cols {
                return Err(Error::parse(no, format!("entry ({r},{c}) outside {rows}x{cols}")));
            }
            let v = parse_q(v).ok_or_else(|| Error::parse(no, format!("bad value `{v}`")))?;
            if v.is_zero() {
                return Err(Error::parse(no, "explicit zero entry"));
            }
            if columns[c - 1].iter().any(|(x, _)| *x == r - 1) {
                return Err(Error::parse(no, format!("duplicate entry ({r},{c})")));
            }
            columns[c - 1].push((r - 1, v));
            seen += 1;
        }
        if seen != nnz {
            return Err(Error::parse(hno + 1, format!("header says {nnz} entries, found {seen}")));
        }
        for col in &mut columns {
            col.sort_by_key(|(r, _)| *r);
        }
        Ok(SparseMatrix { rows, cols, columns })
    }
}

/// Echelon basis of the column span of `m`.
///
/// The echelon form is first found modulo primes and lifted. The lift is
/// accepted when every column reduces to zero against it: its span then
/// contains the column span, whose dimension over Q is at least the rank
/// mod p, i.e. the size of the lift. Failing that, exact elimination is run.
pub fn image_basis(m: &SparseMatrix) -> EchelonBasis {
    modular_image(m).unwrap_or_else(|| echelon(m.rows, m.column_forms()))
}

fn dense_mod(f: Zp, nvars: usize, terms: &[(usize, Q)]) -> Option<Vec<u64>> {
    let mut v = vec![0; nvars];
    for (i, c) in terms {
        v[*i] = f.of_q(c)?;
    }
    Some(v)
}

fn to_forms(nvars: usize, rows: QRows) -> Vec<LinearForm> {
    rows.into_iter().map(|terms| LinearForm { nvars, terms }).collect()
}

fn modular_image(m: &SparseMatrix) -> Option<EchelonBasis> {
    let columns = m.column_forms();
    let rows = multimodular(
        |f| {
            let mut e = ModEchelon::new(f, m.rows);
            for col in &m.columns {
                e.insert(dense_mod(f, m.rows, col)?);
            }
            Some(e)
        },
        |rows| {
            let basis = EchelonBasis {
                nvars: m.rows,
                forms: to_forms(m.rows, rows.clone()),
            };
            columns.iter().all(|c| normal_form(c, &basis).is_zero())
        },
    )?;
    Some(EchelonBasis {
        nvars: m.rows,
        forms: to_forms(m.rows, rows),
    })
}

/// Exact rank: the number of elements in the echelon basis of the columns.
pub fn rank(m: &SparseMatrix) -> usize {
    image_basis(m).len()
}

/// Basis of the kernel of `N` (as a map on column coordinates), by the
/// transpose trick: reduce `h = sum c_j y_j` modulo the Gröbner basis of the
/// rows of `N` in the `c` variables, read off the coefficient `f~_j(y)` of
/// each surviving `c_j`, and echelon those forms in the `y` variables.
///
/// The same steps are first run mod a prime. The lift is accepted when `N`
/// kills every element exactly and there are `mu - rank_p(N)` of them, which
/// bounds the kernel dimension over Q from above.
pub fn kernel_basis(n: &SparseMatrix) -> EchelonBasis {
    modular_kernel(n).unwrap_or_else(|| exact_kernel(n))
}

fn modular_kernel(n: &SparseMatrix) -> Option<EchelonBasis> {
    let mu = n.cols;
    let row_forms = n.row_forms();
    // mu - rank_p(N) for the prime of the last computed echelon
    let nullity_p = std::cell::Cell::new(0);
    let rows = multimodular(
        |f| {
            let mut rows = ModEchelon::new(f, mu);
            for r in &row_forms {
                rows.insert(dense_mod(f, mu, &r.terms)?);
            }
            let mut is_pivot = vec![false; mu];
            for (p, _) in rows.pivot_rows() {
                is_pivot[p] = true;
            }
            let mut tilde = ModEchelon::new(f, mu);
            for j in (0..mu).filter(|&j| !is_pivot[j]) {
                let mut v = vec![0; mu];
                v[j] = 1;
                for (p, row) in rows.pivot_rows() {
                    v[p] = f.sub(0, row[j]);
                }
                tilde.insert(v);
            }
            nullity_p.set(mu - rows.len());
            Some(tilde)
        },
        |forms| {
            forms.len() == nullity_p.get()
                && forms.iter().all(|f| {
                    let mut image = vec![Q::zero(); n.rows];
                    for (j, c) in f {
                        for (i, a) in &n.columns[*j] {
                            image[*i] += a * c;
                        }
                    }
                    image.iter().all(|x| x.is_zero())
                })
        },
    )?;
    Some(EchelonBasis {
        nvars: mu,
        forms: to_forms(mu, rows),
    })
}

/// The transpose trick in exact arithmetic.
pub(crate) fn exact_kernel(n: &SparseMatrix) -> EchelonBasis {
    let mu = n.cols;
    let gb_tr = echelon(mu, n.row_forms());
    // coefficient of c_j in NF(h) as a form in y; starts as y_j
    let mut coeffs: Vec<Vec<(usize, Q)>> = (0..mu).map(|j| vec![(j, Q::one())]).collect();
    let mut is_pivot = vec![false; mu];
    for b in gb_tr.forms() {
        let p = b.leading().unwrap().0;
        is_pivot[p] = true;
        // substituting c_p: coefficient y_p moves onto every other c_j in b
        for (j, beta) in &b.terms[1..] {
            coeffs[*j].push((p, -beta.clone()));
        }
    }
    let tilde = coeffs
        .into_iter()
        .zip(is_pivot)
        .filter(|(_, piv)| !piv)
        .map(|(t, _)| LinearForm::from_terms(mu, t));
    echelon(mu, tilde)
}

/// Basis of `ker / im` given echelon bases of both, as normal forms of the
/// kernel elements modulo the image, re-echeloned.
pub fn quotient_basis(gbk: &EchelonBasis, gbe: &EchelonBasis) -> Result<EchelonBasis> {
    if gbk.nvars != gbe.nvars {
        return Err(Error::Domain(format!("{} vs {} variables", gbk.nvars, gbe.nvars)));
    }
    for (i, e) in gbe.forms.iter().enumerate() {
        if !normal_form(e, gbk).is_zero() {
            return Err(Error::Consistency(format!(
                "image element {} is not in the kernel span (d^2 != 0 upstream?)",
                i + 1
            )));
        }
    }
    Ok(echelon(gbk.nvars, gbk.forms.iter().map(|f| normal_form(f, gbe))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};

    fn form(n: usize, t: &[(usize, i64)]) -> LinearForm {
        LinearForm::from_terms(n, t.iter().map(|&(i, c)| (i, q(c))))
    }

    #[test]
    fn echelon_examples() {
        let b = echelon(2, [form(2, &[(0, 1), (1, 1)]), form(2, &[(0, 1), (1, -1)])]);
        assert_eq!(b.forms(), &[form(2, &[(0, 1)]), form(2, &[(1, 1)])]);
        let b = echelon(2, [form(2, &[(0, 1), (1, 1)]), form(2, &[(0, 2), (1, 2)])]);
        assert_eq!(b.forms(), &[form(2, &[(0, 1), (1, 1)])]);
        let b = echelon(3, []);
        assert!(b.is_empty());
        b.validate().unwrap();
    }

    #[test]
    fn normal_form_examples() {
        let b = echelon(2, [form(2, &[(0, 1)])]);
        assert_eq!(normal_form(&form(2, &[(0, 1), (1, 1)]), &b), form(2, &[(1, 1)]));
        let b = echelon(2, [form(2, &[(0, 1), (1, -1)])]);
        assert_eq!(normal_form(&form(2, &[(0, 1)]), &b), form(2, &[(1, 1)]));
        let b = echelon(4, [form(4, &[(0, 2), (2, 1)]), form(4, &[(1, 1), (3, 5)])]);
        let mut v = b.forms()[0].clone();
        v.scale(&q_frac(3, 7));
        v.sub_scaled(&b.forms()[1], &q(4));
        assert!(normal_form(&v, &b).is_zero());
    }

    #[test]
    fn kernel_examples() {
        let n = SparseMatrix::from_dense(&[vec![q(1), q(1)]]);
        let k = kernel_basis(&n);
        assert_eq!(k.forms(), &[form(2, &[(0, 1), (1, -1)])]);
        let id = SparseMatrix::from_dense(&[vec![q(1), q(0)], vec![q(0), q(1)]]);
        assert!(kernel_basis(&id).is_empty());
        let z = SparseMatrix::zeros(2, 3);
        assert_eq!(kernel_basis(&z).len(), 3);
    }

    #[test]
    fn quotient_examples() {
        let gbk = echelon(2, [form(2, &[(0, 1)]), form(2, &[(1, 1)])]);
        let gbe = echelon(2, [form(2, &[(0, 1)])]);
        assert_eq!(quotient_basis(&gbk, &gbe).unwrap().forms(), &[form(2, &[(1, 1)])]);
        assert!(quotient_basis(&gbk, &gbk).unwrap().is_empty());
        // image not inside kernel
        let small = echelon(2, [form(2, &[(0, 1)])]);
        let big = echelon(2, [form(2, &[(1, 1)])]);
        assert!(matches!(quotient_basis(&small, &big), Err(Error::Consistency(_))));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&SparseMatrix::zeros(3, 4)), 0);
        let m = SparseMatrix::from_dense(&[vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]]);
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn text_formats_round_trip() {
        let m = SparseMatrix::from_dense(&[vec![q(1), q(0), q_frac(-2, 3)], vec![q(0), q(5), q(0)]]);
        let t = m.to_text();
        assert!(t.starts_with("2 3 3\n"));
        assert_eq!(SparseMatrix::from_text(&t).unwrap(), m);
        let b = echelon(3, m.row_forms());
        assert_eq!(EchelonBasis::from_text(&b.to_text()).unwrap(), b);
        assert!(matches!(SparseMatrix::from_text("2 2 1\n1 3 4\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(SparseMatrix::from_text("2 2 2\n1 1 4\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn product_and_transpose() {
        let a = SparseMatrix::from_dense(&[vec![q(1), q(2)], vec![q(3), q(4)]]);
        let b = SparseMatrix::from_dense(&[vec![q(0), q(1)], vec![q(1), q(0)]]);
        assert_eq!(a.mul(&b), SparseMatrix::from_dense(&[vec![q(2), q(1)], vec![q(4), q(3)]]));
        assert_eq!(a.transpose().get(0, 1), q(3));
    }
}
