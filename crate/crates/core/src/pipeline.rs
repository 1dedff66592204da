//! Orchestration: cached bases and matrices, cohomology tables, generators
//! and the `omega ^ h` factorization check.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::coboundary::{apply_d, coboundary_matrix_with, CoboundaryMatrix, Operator};
use crate::cochain::{enumerate_shapes, format_term, omega, parse_term, wedge, Algebra, CochainVector};
use crate::config::{Config, Limits};
use crate::error::{Error, Result};
use crate::invariants::{trivial_basis_with, InvariantBasis};
use crate::linformgb::{image_basis, kernel_basis, normal_form, quotient_basis, EchelonBasis, LinearForm, SparseMatrix};
use crate::rational::parse_q;

/// `(algebra, relative, degree, weight)`
type Key = (Algebra, bool, usize, i32);

/// Degrees `m` at which the ambient space `C^m_w` has at least one shape.
pub fn feasible_degrees(algebra: Algebra, w: i32, relative: bool) -> Vec<usize> {
    if w < -2 {
        return Vec::new();
    }
    // at most two degree-1 factors and three degree-2 factors; every other
    // factor has weight >= 1
    let bound = if relative { w + 4 } else { w + 7 }.max(0) as usize;
    (0..=bound)
        .filter(|&m| !enumerate_shapes(m, w, algebra, relative).is_empty())
        .collect()
}

/// Caches bases, matrices and image bases for one run, optionally backed by
/// a checkpoint directory of exported text files.
pub struct Session {
    budget: Budget,
    limits: Limits,
    checkpoint_dir: Option<PathBuf>,
    bases: Mutex<HashMap<Key, Arc<InvariantBasis>>>,
    matrices: Mutex<HashMap<Key, Arc<CoboundaryMatrix>>>,
    images: Mutex<HashMap<Key, Arc<EchelonBasis>>>,
}

impl Default for Session {
    fn default() -> Self {
        Session::new(&Config::default())
    }
}

impl Session {
    pub fn new(config: &Config) -> Self {
        Session {
            budget: config.budget(),
            limits: config.limits,
            checkpoint_dir: config.checkpoint_dir.clone(),
            bases: Mutex::default(),
            matrices: Mutex::default(),
            images: Mutex::default(),
        }
    }

    fn checkpoint(&self, name: &str) -> Option<PathBuf> {
        self.checkpoint_dir.as_ref().map(|d| d.join(name))
    }

    fn store(&self, path: Option<PathBuf>, text: &str) -> Result<()> {
        if let Some(p) = path {
            if let Some(dir) = p.parent() {
                fs::create_dir_all(dir)?;
            }
            // write then rename so an interrupted run leaves no torn file
            let tmp = p.with_extension("partial");
            fs::write(&tmp, text)?;
            fs::rename(tmp, p)?;
        }
        Ok(())
    }

    fn check_limits(&self, m: usize, w: i32) -> Result<()> {
        if w.abs() > self.limits.max_weight || m > self.limits.max_degree {
            return Err(Error::Budget(format!(
                "(m={m}, w={w}) is outside the configured limits (|w| <= {}, m <= {})",
                self.limits.max_weight, self.limits.max_degree
            )));
        }
        Ok(())
    }

    /// Invariant basis of `C^m_w`.
    pub fn basis(&self, algebra: Algebra, relative: bool, m: usize, w: i32) -> Result<Arc<InvariantBasis>> {
        let key = (algebra, relative, m, w);
        if let Some(b) = self.bases.lock().unwrap().get(&key) {
            return Ok(b.clone());
        }
        let path = self.checkpoint(&basis_file_name(algebra, relative, m, w));
        let basis = match path.as_deref().filter(|p| p.exists()) {
            Some(p) => {
                let b = InvariantBasis::from_text(&fs::read_to_string(p)?)?;
                if (b.algebra, b.relative, b.degree, b.weight) != key {
                    return Err(Error::Consistency(format!("checkpoint {} holds a different block", p.display())));
                }
                b
            }
            None => {
                if !enumerate_shapes(m, w, algebra, relative).is_empty() {
                    self.check_limits(m, w)?;
                }
                let b = trivial_basis_with(m, w, algebra, relative, &self.budget)?;
                self.store(path, &b.to_text())?;
                b
            }
        };
        let basis = Arc::new(basis);
        self.bases.lock().unwrap().insert(key, basis.clone());
        Ok(basis)
    }

    /// Matrix of the coboundary `C^m_w -> C^{m+1}_w`.
    pub fn matrix(&self, algebra: Algebra, relative: bool, m: usize, w: i32) -> Result<Arc<CoboundaryMatrix>> {
        let key = (algebra, relative, m, w);
        if let Some(c) = self.matrices.lock().unwrap().get(&key) {
            return Ok(c.clone());
        }
        let op = Operator::for_algebra(algebra);
        let source = self.basis(algebra, relative, m, w)?;
        let target = self.basis(algebra, relative, m + 1, w)?;
        let path = self.checkpoint(&matrix_file_name(algebra, relative, m, w));
        let cm = match path.as_deref().filter(|p| p.exists()) {
            Some(p) => {
                let matrix = SparseMatrix::from_text(&fs::read_to_string(p)?)?;
                if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
                    return Err(Error::Consistency(format!(
                        "checkpoint {} is {}x{}, expected {}x{}",
                        p.display(),
                        matrix.rows(),
                        matrix.cols(),
                        target.dim(),
                        source.dim()
                    )));
                }
                CoboundaryMatrix {
                    op,
                    source,
                    target,
                    matrix,
                }
            }
            None => {
                let cm = coboundary_matrix_with(source, target, op, &self.budget)?;
                self.store(path, &cm.matrix.to_text())?;
                cm
            }
        };
        let cm = Arc::new(cm);
        self.matrices.lock().unwrap().insert(key, cm.clone());
        Ok(cm)
    }

    /// Every basis built or loaded so far, in key order.
    pub fn cached_bases(&self) -> Vec<Arc<InvariantBasis>> {
        let map = self.bases.lock().unwrap();
        let mut keys: Vec<&Key> = map.keys().collect();
        keys.sort();
        keys.into_iter().map(|k| map[k].clone()).collect()
    }

    /// Echelon basis of `d(C^{m-1}_w)` in the coordinates of `C^m_w`.
    pub fn image_gb(&self, algebra: Algebra, relative: bool, m: usize, w: i32) -> Result<Arc<EchelonBasis>> {
        let key = (algebra, relative, m, w);
        if let Some(e) = self.images.lock().unwrap().get(&key) {
            return Ok(e.clone());
        }
        let gb = if m == 0 {
            EchelonBasis::empty(self.basis(algebra, relative, 0, w)?.dim())
        } else {
            let cm = self.matrix(algebra, relative, m - 1, w)?;
            self.budget.check_time(&format!("image basis at (m={m}, w={w})"))?;
            image_basis(&cm.matrix)
        };
        let gb = Arc::new(gb);
        self.images.lock().unwrap().insert(key, gb.clone());
        Ok(gb)
    }

    /// Echelon basis of `ker(d|C^m_w)`.
    pub fn kernel_gb(&self, algebra: Algebra, relative: bool, m: usize, w: i32) -> Result<EchelonBasis> {
        let cm = self.matrix(algebra, relative, m, w)?;
        self.budget.check_time(&format!("kernel basis at (m={m}, w={w})"))?;
        Ok(kernel_basis(&cm.matrix))
    }

    /// Dimensions, ranks and Betti numbers for `degrees`. Blocks that hit the
    /// budget become explicit gaps; every other error is returned.
    pub fn cohomology_table(
        &self,
        algebra: Algebra,
        w: i32,
        relative: bool,
        degrees: RangeInclusive<usize>,
    ) -> Result<CohomologyTable> {
        let (lo, hi) = (*degrees.start(), *degrees.end());
        let span: Vec<usize> = (lo.saturating_sub(1)..=hi + 1).collect();

        let dims: HashMap<usize, std::result::Result<usize, String>> = span
            .par_iter()
            .map(|&m| (m, gap_or(self.basis(algebra, relative, m, w).map(|b| b.dim()))))
            .collect::<Vec<_>>()
            .into_iter()
            .map(|(m, r)| r.map(|x| (m, x)))
            .collect::<Result<_>>()?;

        // rank of the arrow into degree m
        let into: Vec<usize> = span.iter().copied().filter(|&m| m >= 1 && m >= lo && m <= hi + 1).collect();
        let ranks: HashMap<usize, std::result::Result<usize, String>> = into
            .par_iter()
            .map(|&m| {
                let r = match (&dims[&(m - 1)], &dims[&m]) {
                    (Err(e), _) | (_, Err(e)) => Ok(Err(e.clone())),
                    _ => gap_or(self.image_gb(algebra, relative, m, w).map(|g| g.len())),
                };
                (m, r)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .map(|(m, r)| r.map(|x| (m, x)))
            .collect::<Result<_>>()?;

        let rank_into = |m: usize| -> std::result::Result<usize, String> {
            if m == 0 {
                Ok(0)
            } else {
                ranks[&m].clone()
            }
        };
        let mut rows = Vec::new();
        for m in lo..=hi {
            let dim = dims[&m].clone();
            let rin = rank_into(m);
            let rout = rank_into(m + 1);
            let gap = [&dim, &rin, &rout].iter().find_map(|r| r.as_ref().err().cloned());
            let betti = match (&dim, &rin, &rout) {
                (Ok(d), Ok(a), Ok(b)) => Some(
                    d.checked_sub(a + b)
                        .ok_or_else(|| Error::Consistency(format!("ranks {a} + {b} exceed dim {d} at m={m}")))?,
                ),
                _ => None,
            };
            rows.push(TableRow {
                degree: m,
                dim: dim.ok(),
                rank_in: rin.ok(),
                rank_out: rout.ok(),
                betti,
                gap,
            });
        }
        let table = CohomologyTable {
            algebra,
            weight: w,
            relative,
            rows,
        };
        table.check()?;
        Ok(table)
    }

    /// Table over every degree where `C^m_w` is nonzero at the ambient level.
    pub fn full_table(&self, algebra: Algebra, w: i32, relative: bool) -> Result<CohomologyTable> {
        let ds = feasible_degrees(algebra, w, relative);
        match (ds.first(), ds.last()) {
            (Some(&lo), Some(&hi)) => self.cohomology_table(algebra, w, relative, lo..=hi),
            _ => Ok(CohomologyTable {
                algebra,
                weight: w,
                relative,
                rows: Vec::new(),
            }),
        }
    }

    /// Representatives of a basis of `H^m_w` (relative complex).
    pub fn generator(&self, algebra: Algebra, w: i32, m: usize) -> Result<GeneratorData> {
        let basis = self.basis(algebra, true, m, w)?;
        let gb_image = self.image_gb(algebra, true, m, w)?;
        let gb_kernel = self.kernel_gb(algebra, true, m, w)?;
        let quotient = quotient_basis(&gb_kernel, &gb_image)?;
        let op = Operator::for_algebra(algebra);
        let mut generators = Vec::new();
        for f in quotient.forms() {
            let h = basis.combine(f.terms());
            if !apply_d(&h, op)?.is_zero() {
                return Err(Error::Consistency(format!("generator at (m={m}, w={w}) is not closed")));
            }
            if normal_form(f, &gb_image).is_zero() {
                return Err(Error::Consistency(format!("generator at (m={m}, w={w}) is exact")));
            }
            generators.push(h);
        }
        Ok(GeneratorData {
            algebra,
            weight: w,
            degree: m,
            gb_image: (*gb_image).clone(),
            gb_kernel,
            quotient,
            generators,
        })
    }

    /// Checks whether `omega ^ -` maps `H^m(ham0)_w` onto `H^{m+2}(ham)_{w-2}`.
    /// Without `degree` the unique degree with nonzero source Betti number is
    /// used.
    pub fn factorize(&self, w: i32, degree: Option<usize>) -> Result<FactorizationReport> {
        if w % 2 != 0 {
            return Err(Error::Domain(format!("odd weight {w}: the relative cohomology vanishes")));
        }
        let m = match degree {
            Some(m) => m,
            None => {
                let table = self.full_table(Algebra::Ham0, w, true)?;
                if let Some(r) = table.rows.iter().find(|r| r.gap.is_some()) {
                    return Err(Error::Budget(format!("ham0 table at w={w} has a gap at m={}", r.degree)));
                }
                let nz: Vec<usize> = table.rows.iter().filter(|r| r.betti.unwrap_or(0) > 0).map(|r| r.degree).collect();
                match nz.as_slice() {
                    [] => {
                        return Ok(FactorizationReport::empty_source(
                            w,
                            format!("H^m(ham0)_{w} = 0 for every m; nothing to map"),
                        ))
                    }
                    [m] => *m,
                    _ => {
                        return Err(Error::Domain(format!(
                            "H^m(ham0)_{w} is nonzero at degrees {nz:?}; pick one with an explicit degree"
                        )))
                    }
                }
            }
        };
        let src_row = self.single_row(Algebra::Ham0, w, m)?;
        let (tw, tm) = (w - 2, m + 2);
        let tgt_row = self.single_row(Algebra::Ham, tw, tm)?;
        let source = SpaceSummary::from_row(Algebra::Ham0, w, &src_row);
        let target = SpaceSummary::from_row(Algebra::Ham, tw, &tgt_row);

        let gen = self.generator(Algebra::Ham0, w, m)?;
        let tbasis = self.basis(Algebra::Ham, true, tm, tw)?;
        let tgb = self.image_gb(Algebra::Ham, true, tm, tw)?;
        let om = omega();
        let mut omega_h = Vec::new();
        let mut nfs = Vec::new();
        for h in &gen.generators {
            let coords = tbasis.expand(&wedge(&om, h))?;
            let hbar = LinearForm::from_terms(tbasis.dim(), coords);
            nfs.push(normal_form(&hbar, &tgb));
            omega_h.push(hbar);
        }

        let all_zero = nfs.iter().all(|f| f.is_zero());
        let (verdict, note) = if all_zero {
            let note = if gen.generators.is_empty() {
                format!("H^{m}(ham0)_{w} = 0; the map is zero")
            } else {
                "omega ^ h is exact for every generator h".to_string()
            };
            (Verdict::Trivial, note)
        } else if source.betti == 1 && target.betti == 1 {
            (Verdict::Isomorphism, "both sides are one-dimensional and omega ^ h is not exact".to_string())
        } else {
            (
                Verdict::Indeterminate,
                format!(
                    "omega ^ h is not exact but the Betti numbers are {} and {}",
                    source.betti, target.betti
                ),
            )
        };
        Ok(FactorizationReport {
            source_weight: w,
            source: Some(source),
            target: Some(target),
            image_gb_source: Some(gen.gb_image.len()),
            kernel_gb_source: Some(gen.gb_kernel.len()),
            image_gb_target: Some(tgb.len()),
            generators: gen.generators.iter().map(vector_lines).collect(),
            omega_h: omega_h.iter().map(form_coords).collect(),
            normal_forms: nfs.iter().map(form_coords).collect(),
            verdict,
            note,
        })
    }

    fn single_row(&self, algebra: Algebra, w: i32, m: usize) -> Result<TableRow> {
        let t = self.cohomology_table(algebra, w, true, m..=m)?;
        let row = t.rows.into_iter().next().expect("one row");
        match &row.gap {
            Some(g) => Err(Error::Budget(g.clone())),
            None => Ok(row),
        }
    }
}

fn gap_or<T>(r: Result<T>) -> Result<std::result::Result<T, String>> {
    match r {
        Ok(x) => Ok(Ok(x)),
        Err(Error::Budget(msg)) => Ok(Err(msg)),
        Err(e) => Err(e),
    }
}

pub fn basis_file_name(algebra: Algebra, relative: bool, m: usize, w: i32) -> String {
    format!("basis-{algebra}-w{w}-m{m}{}.txt", if relative { "" } else { "-abs" })
}

pub fn matrix_file_name(algebra: Algebra, relative: bool, m: usize, w: i32) -> String {
    let op = Operator::for_algebra(algebra);
    format!("{op}-{algebra}-w{w}-m{m}{}.mtx", if relative { "" } else { "-abs" })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub degree: usize,
    pub dim: Option<usize>,
    /// Rank of `d: C^{m-1} -> C^m`.
    pub rank_in: Option<usize>,
    /// Rank of `d: C^m -> C^{m+1}`.
    pub rank_out: Option<usize>,
    pub betti: Option<usize>,
    /// Why a value is missing, if one is.
    pub gap: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub algebra: Algebra,
    pub weight: i32,
    pub relative: bool,
    pub rows: Vec<TableRow>,
}

impl CohomologyTable {
    pub fn row(&self, m: usize) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.degree == m)
    }

    pub fn is_complete(&self) -> bool {
        self.rows.iter().all(|r| r.gap.is_none())
    }

    pub fn dims(&self) -> Vec<Option<usize>> {
        self.rows.iter().map(|r| r.dim).collect()
    }

    pub fn ranks_in(&self) -> Vec<Option<usize>> {
        self.rows.iter().map(|r| r.rank_in).collect()
    }

    pub fn bettis(&self) -> Vec<Option<usize>> {
        self.rows.iter().map(|r| r.betti).collect()
    }

    /// Row identities, agreement of adjacent ranks, and the truncated Euler
    /// identity `sum (-1)^m (dim - b) = (-1)^lo rank_in(lo) + (-1)^hi rank_out(hi)`.
    pub fn check(&self) -> Result<()> {
        for r in &self.rows {
            if let (Some(d), Some(a), Some(b), Some(betti)) = (r.dim, r.rank_in, r.rank_out, r.betti) {
                if betti + a + b != d {
                    return Err(Error::Consistency(format!("row m={} violates b = dim - ranks", r.degree)));
                }
            }
        }
        for p in self.rows.windows(2) {
            if let (Some(a), Some(b)) = (p[0].rank_out, p[1].rank_in) {
                if a != b {
                    return Err(Error::Consistency(format!("rank mismatch between m={} and m={}", p[0].degree, p[1].degree)));
                }
            }
        }
        if self.is_complete() && !self.rows.is_empty() {
            let sgn = |m: usize| if m.is_multiple_of(2) { 1i64 } else { -1 };
            let lhs: i64 = self
                .rows
                .iter()
                .map(|r| sgn(r.degree) * (r.dim.unwrap() as i64 - r.betti.unwrap() as i64))
                .sum();
            let (first, last) = (&self.rows[0], self.rows.last().unwrap());
            let rhs = sgn(first.degree) * first.rank_in.unwrap() as i64 + sgn(last.degree) * last.rank_out.unwrap() as i64;
            if lhs != rhs {
                return Err(Error::Consistency(format!("Euler identity fails: {lhs} != {rhs}")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for CohomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cell = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
        writeln!(f, "# table algebra={} weight={} relative={}", self.algebra, self.weight, self.relative)?;
        writeln!(f, "{:>4} {:>8} {:>8} {:>8} {:>6}", "m", "dim", "rank_in", "rank_out", "betti")?;
        for r in &self.rows {
            write!(
                f,
                "{:>4} {:>8} {:>8} {:>8} {:>6}",
                r.degree,
                cell(r.dim),
                cell(r.rank_in),
                cell(r.rank_out),
                cell(r.betti)
            )?;
            if let Some(g) = &r.gap {
                write!(f, "  gap: {g}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Everything computed on the way to `H^m_w` generators.
#[derive(Clone, Debug)]
pub struct GeneratorData {
    pub algebra: Algebra,
    pub weight: i32,
    pub degree: usize,
    /// Echelon basis of the image of `d` into `C^m`.
    pub gb_image: EchelonBasis,
    /// Echelon basis of the kernel of `d` on `C^m`.
    pub gb_kernel: EchelonBasis,
    /// Normal forms of the kernel modulo the image, re-echeloned.
    pub quotient: EchelonBasis,
    pub generators: Vec<CochainVector>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Isomorphism,
    Trivial,
    Indeterminate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Isomorphism => "isomorphism",
            Verdict::Trivial => "trivial",
            Verdict::Indeterminate => "indeterminate",
        })
    }
}

impl std::str::FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "isomorphism" => Ok(Verdict::Isomorphism),
            "trivial" => Ok(Verdict::Trivial),
            "indeterminate" => Ok(Verdict::Indeterminate),
            _ => Err(Error::Domain(format!("unknown verdict `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceSummary {
    pub algebra: Algebra,
    pub weight: i32,
    pub degree: usize,
    pub dim: usize,
    pub betti: usize,
}

impl SpaceSummary {
    fn from_row(algebra: Algebra, weight: i32, r: &TableRow) -> Self {
        SpaceSummary {
            algebra,
            weight,
            degree: r.degree,
            dim: r.dim.unwrap_or(0),
            betti: r.betti.unwrap_or(0),
        }
    }
}

/// Outcome of the `omega ^` check. Cochains are stored as `c * word` lines
/// and coordinate vectors as 1-based `(index, value)` pairs, so the JSON form
/// is exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub source_weight: i32,
    pub source: Option<SpaceSummary>,
    pub target: Option<SpaceSummary>,
    pub image_gb_source: Option<usize>,
    pub kernel_gb_source: Option<usize>,
    pub image_gb_target: Option<usize>,
    pub generators: Vec<Vec<String>>,
    pub omega_h: Vec<Vec<(usize, String)>>,
    pub normal_forms: Vec<Vec<(usize, String)>>,
    pub verdict: Verdict,
    pub note: String,
}

impl FactorizationReport {
    fn empty_source(w: i32, note: String) -> Self {
        FactorizationReport {
            source_weight: w,
            source: None,
            target: None,
            image_gb_source: None,
            kernel_gb_source: None,
            image_gb_target: None,
            generators: Vec::new(),
            omega_h: Vec::new(),
            normal_forms: Vec::new(),
            verdict: Verdict::Trivial,
            note,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
        r.validate()?;
        Ok(r)
    }

    /// Generators parsed back into cochains.
    pub fn generator_vectors(&self) -> Result<Vec<CochainVector>> {
        let (m, w) = match &self.source {
            Some(s) => (s.degree, s.weight),
            None => return Ok(Vec::new()),
        };
        self.generators
            .iter()
            .map(|lines| {
                let mut v = CochainVector::zero(m, w);
                for (i, l) in lines.iter().enumerate() {
                    let (word, c) = parse_term(l, i + 1)?;
                    if word.degree() != m || word.weight() != w {
                        return Err(Error::parse(i + 1, format!("word {word} is not in (m={m}, w={w})")));
                    }
                    v.add_term(word, c);
                }
                Ok(v)
            })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        self.generator_vectors()?;
        for (i, (_, c)) in self.omega_h.iter().chain(&self.normal_forms).flatten().enumerate() {
            parse_q(c).ok_or_else(|| Error::parse(i + 1, format!("bad rational `{c}`")))?;
        }
        let nf_nonzero = self.normal_forms.iter().any(|f| !f.is_empty());
        let ok = match self.verdict {
            Verdict::Trivial => !nf_nonzero,
            Verdict::Isomorphism => {
                nf_nonzero && self.source.as_ref().map(|s| s.betti) == Some(1) && self.target.as_ref().map(|s| s.betti) == Some(1)
            }
            Verdict::Indeterminate => nf_nonzero,
        };
        if !ok {
            return Err(Error::Consistency(format!("verdict {} contradicts the report payload", self.verdict)));
        }
        Ok(())
    }
}

fn vector_lines(v: &CochainVector) -> Vec<String> {
    v.terms().map(|(w, c)| format_term(w, c)).collect()
}

fn form_coords(f: &LinearForm) -> Vec<(usize, String)> {
    f.terms().iter().map(|(i, c)| (i + 1, c.to_string())).collect()
}

/// Writes `text` to `path`, or stdout for `-`.
pub fn write_output(path: &Path, text: &str) -> Result<()> {
    if path == Path::new("-") {
        print!("{text}");
        Ok(())
    } else {
        Ok(fs::write(path, text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feasible_degrees_small() {
        assert_eq!(feasible_degrees(Algebra::Ham, -2, true), vec![2]);
        assert_eq!(feasible_degrees(Algebra::Ham0, -2, true), Vec::<usize>::new());
        let d = feasible_degrees(Algebra::Ham0, 16, true);
        assert_eq!(d.first(), Some(&1));
        // k3=4, k4=4, k6=1 is a shape, though it carries no invariants
        assert_eq!(d.last(), Some(&9));
    }

    #[test]
    fn low_weight_tables_are_consistent() {
        let s = Session::default();
        for w in [0, 2, 4, 6] {
            for a in [Algebra::Ham, Algebra::Ham0] {
                let t = s.full_table(a, w, true).unwrap();
                t.check().unwrap();
                if a == Algebra::Ham {
                    assert!(t.bettis().iter().all(|b| *b == Some(0) || (w == 0 && *b == Some(1))), "{t}");
                }
            }
        }
    }

    #[test]
    fn ham0_weight_two_has_a_class_in_degree_two() {
        // the sp(2)-invariant of Lambda^2 S^3, with nothing on either side
        let t = Session::default().full_table(Algebra::Ham0, 2, true).unwrap();
        assert_eq!(t.row(2).unwrap().betti, Some(1));
    }

    #[test]
    fn budget_gap_is_reported() {
        let cfg = Config {
            max_slice_words: Some(1),
            ..Config::default()
        };
        let s = Session::new(&cfg);
        let t = s.cohomology_table(Algebra::Ham, 8, true, 6..=7).unwrap();
        assert!(!t.is_complete());
        assert!(t.rows.iter().any(|r| r.gap.is_some() && r.betti.is_none()));
        assert!(t.to_string().contains("gap:"));
    }

    #[test]
    fn weight_ten_generator_and_report() {
        let s = Session::default();
        let g = s.generator(Algebra::Ham0, 10, 5).unwrap();
        assert_eq!(g.generators.len(), 1);
        let r = s.factorize(10, Some(5)).unwrap();
        assert_eq!(r.verdict, Verdict::Isomorphism);
        let back = FactorizationReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.generator_vectors().unwrap(), g.generators);
    }

    #[test]
    fn odd_weight_is_rejected_and_empty_source_is_trivial() {
        let s = Session::default();
        assert!(matches!(s.factorize(9, None), Err(Error::Domain(_))));
        let r = s.factorize(4, None).unwrap();
        assert_eq!(r.verdict, Verdict::Trivial);
        assert!(r.source.is_none());
        let r = s.factorize(10, Some(4)).unwrap();
        assert_eq!(r.verdict, Verdict::Trivial);
        assert_eq!(r.source.as_ref().unwrap().betti, 0);
    }

    #[test]
    fn checkpoints_resume() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = Config {
            checkpoint_dir: Some(dir.path().to_path_buf()),
            ..Config::default()
        };
        let t1 = Session::new(&cfg).full_table(Algebra::Ham, 8, true).unwrap();
        assert!(dir.path().join(basis_file_name(Algebra::Ham, true, 7, 8)).exists());
        assert!(dir.path().join(matrix_file_name(Algebra::Ham, true, 6, 8)).exists());
        let t2 = Session::new(&cfg).full_table(Algebra::Ham, 8, true).unwrap();
        assert_eq!(t1, t2);
        // a corrupted checkpoint is a parse error, not a silent recompute
        fs::write(dir.path().join(basis_file_name(Algebra::Ham, true, 5, 8)), "# basis junk\n").unwrap();
        assert!(matches!(Session::new(&cfg).full_table(Algebra::Ham, 8, true), Err(Error::Parse { .. })));
    }

    #[test]
    fn report_rejects_inconsistent_verdict() {
        let s = Session::default();
        let mut r = s.factorize(10, Some(5)).unwrap();
        r.verdict = Verdict::Trivial;
        let text = r.to_json();
        assert!(matches!(FactorizationReport::from_json(&text), Err(Error::Consistency(_))));
        assert!(matches!(FactorizationReport::from_json("{\n  \"source_weight\": 1,\n"), Err(Error::Parse { .. })));
    }
}
