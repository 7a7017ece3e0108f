//! Random matrices over `ℤ/p^K` and its quadratic extension, and their
//! singular numbers.
//!
//! Alternating matrices have base entries; Hermitian matrices have extension
//! entries with real diagonal. Products `B^T A B` and `B^* A B` are both
//! `B.adjoint() * A * B`, since the involution is trivial on the base ring.

use crate::heckecoeff::Case;
use crate::padicring::{BaseElem, ExtElem, RingCfg, RingElem, Val};
use crate::sigcore::Signature;
use crate::{Error, Result};
use rand::Rng;
use serde::ser::{Serialize, SerializeSeq, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    None,
    Alternating,
    Hermitian,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalMatrix<E> {
    rows: usize,
    cols: usize,
    entries: Vec<E>,
    symmetry: Symmetry,
    cfg: RingCfg,
}

pub type AltMatrix = LocalMatrix<BaseElem>;
pub type HerMatrix = LocalMatrix<ExtElem>;

/// Largest size accepted by [`sn_minors`].
pub const MINORS_BOUND: usize = 6;

/// Rejection cap for [`haar_gl`]; the acceptance rate is at least `1 - 1/p - 1/p²`.
const GL_RETRIES: usize = 10_000;

impl<E: RingElem> LocalMatrix<E> {
    /// Checks the symmetry tag against the entries.
    pub fn new(cfg: &RingCfg, rows: usize, cols: usize, entries: Vec<E>, symmetry: Symmetry) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        let m = LocalMatrix { rows, cols, entries, symmetry, cfg: *cfg };
        m.check_symmetry()?;
        Ok(m)
    }

    pub fn zeros(cfg: &RingCfg, rows: usize, cols: usize, symmetry: Symmetry) -> Self {
        LocalMatrix { rows, cols, entries: vec![E::zero(cfg); rows * cols], symmetry, cfg: *cfg }
    }

    pub fn identity(cfg: &RingCfg, n: usize) -> Self {
        let mut m = Self::zeros(cfg, n, n, Symmetry::None);
        for i in 0..n {
            m.set(i, i, E::one(cfg));
        }
        m
    }

    pub fn diag_p_powers(cfg: &RingCfg, exps: &[i64]) -> Result<Self> {
        let mut m = Self::zeros(cfg, exps.len(), exps.len(), Symmetry::None);
        for (i, &e) in exps.iter().enumerate() {
            m.set(i, i, E::from_base(p_power(cfg, e)?));
        }
        Ok(m)
    }

    fn check_symmetry(&self) -> Result<()> {
        if self.symmetry == Symmetry::None {
            return Ok(());
        }
        if self.rows != self.cols {
            return Err(Error::Dimension(format!("symmetric matrix must be square, got {}x{}", self.rows, self.cols)));
        }
        for i in 0..self.rows {
            for j in 0..=i {
                let (a, b) = (self.get(i, j), self.get(j, i));
                let ok = match self.symmetry {
                    Symmetry::Alternating => a == -b && (i != j || a.is_zero()),
                    Symmetry::Hermitian => a == b.conj() && (i != j || a == a.conj()),
                    Symmetry::None => true,
                };
                if !ok {
                    return Err(Error::Domain(format!("entries ({i},{j}) and ({j},{i}) break the {:?} symmetry", self.symmetry)));
                }
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn cfg(&self) -> &RingCfg {
        &self.cfg
    }

    pub fn get(&self, i: usize, j: usize) -> E {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: E) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn with_symmetry(mut self, symmetry: Symmetry) -> Result<Self> {
        self.symmetry = symmetry;
        self.check_symmetry()?;
        Ok(self)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::Dimension(format!("{}x{} times {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let mut out = Self::zeros(&self.cfg, self.rows, o.cols, Symmetry::None);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = E::zero(&self.cfg);
                for k in 0..self.cols {
                    acc = acc + self.get(i, k) * o.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Conjugate transpose; the plain transpose over the base ring.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(&self.cfg, self.cols, self.rows, Symmetry::None);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Top-left `k×k` submatrix.
    pub fn corner(&self, k: usize) -> Result<Self> {
        if k > self.rows || k > self.cols {
            return Err(Error::Dimension(format!("corner {k} of a {}x{} matrix", self.rows, self.cols)));
        }
        let entries = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).map(|(i, j)| self.get(i, j)).collect();
        Ok(LocalMatrix { rows: k, cols: k, entries, symmetry: self.symmetry, cfg: self.cfg })
    }

    /// `B^† A B`, keeping the symmetry tag of `A`.
    pub fn sandwich(&self, b: &Self) -> Result<Self> {
        if self.rows != self.cols || b.rows != self.cols {
            return Err(Error::Dimension(format!("sandwich of {}x{} by {}x{}", self.rows, self.cols, b.rows, b.cols)));
        }
        let mut out = b.adjoint().mul(self)?.mul(b)?;
        out.symmetry = self.symmetry;
        debug_assert!(out.check_symmetry().is_ok());
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row_dst += c row_src`.
    fn add_row(&mut self, dst: usize, src: usize, c: E) {
        for j in 0..self.cols {
            let v = self.get(dst, j) + c * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    /// `col_dst += col_src c`.
    fn add_col(&mut self, dst: usize, src: usize, c: E) {
        for i in 0..self.rows {
            let v = self.get(i, dst) + self.get(i, src) * c;
            self.set(i, dst, v);
        }
    }

    fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let entries = rows.iter().flat_map(|&i| cols.iter().map(move |&j| (i, j))).map(|(i, j)| self.get(i, j)).collect();
        LocalMatrix { rows: rows.len(), cols: cols.len(), entries, symmetry: Symmetry::None, cfg: self.cfg }
    }
}

impl<E: RingElem> Serialize for LocalMatrix<E> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

fn p_power(cfg: &RingCfg, e: i64) -> Result<BaseElem> {
    if e < 0 || e >= cfg.precision() as i64 {
        return Err(Error::Precision(format!("exponent {e} outside [0, K) with K = {}", cfg.precision())));
    }
    Ok(cfg.p_pow(e as u32))
}

/// `diag(π^{λ_1}, …)`, Hermitian.
pub fn canonical_her(cfg: &RingCfg, lambda: &Signature) -> Result<HerMatrix> {
    let exps: Vec<i64> = lambda.parts().to_vec();
    Ok(HerMatrix::diag_p_powers(cfg, &exps)?.with_symmetry(Symmetry::Hermitian)?)
}

/// Blocks `(0, π^{λ_i}; -π^{λ_i}, 0)` followed by zero rows up to `size`,
/// which must be `2n` or `2n + 1` for `λ ∈ Sig_n`.
pub fn canonical_alt(cfg: &RingCfg, lambda: &Signature, size: usize) -> Result<AltMatrix> {
    let n = lambda.len();
    if size != 2 * n && size != 2 * n + 1 {
        return Err(Error::Dimension(format!("alternating size {size} for {n} singular numbers")));
    }
    let mut m = AltMatrix::zeros(cfg, size, size, Symmetry::Alternating);
    for (i, &l) in lambda.parts().iter().enumerate() {
        let x = p_power(cfg, l)?;
        m.set(2 * i, 2 * i + 1, x);
        m.set(2 * i + 1, 2 * i, -x);
    }
    Ok(m)
}

/// The canonical matrix of the class, as either ring.
pub fn canonical_matrix(case: Case, cfg: &RingCfg, lambda: &Signature, size: usize) -> Result<AnyMatrix> {
    match case {
        Case::Alt => canonical_alt(cfg, lambda, size).map(AnyMatrix::Alt),
        Case::Her => {
            if size != lambda.len() {
                return Err(Error::Dimension(format!("Hermitian size {size} for {} singular numbers", lambda.len())));
            }
            canonical_her(cfg, lambda).map(AnyMatrix::Her)
        }
    }
}

/// A matrix of either class.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMatrix {
    Alt(AltMatrix),
    Her(HerMatrix),
}

impl AnyMatrix {
    pub fn sn(&self) -> Result<SnResult> {
        match self {
            AnyMatrix::Alt(m) => sn_elim(m),
            AnyMatrix::Her(m) => sn_elim(m),
        }
    }
}

impl Serialize for AnyMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            AnyMatrix::Alt(m) => m.serialize(s),
            AnyMatrix::Her(m) => m.serialize(s),
        }
    }
}

/// Matrix with i.i.d. Haar entries in `M_{rows×cols}(𝔬)`.
pub fn haar_m<E: RingElem, R: Rng + ?Sized>(cfg: &RingCfg, rows: usize, cols: usize, rng: &mut R) -> LocalMatrix<E> {
    let entries = (0..rows * cols).map(|_| E::sample(cfg, rng)).collect();
    LocalMatrix { rows, cols, entries, symmetry: Symmetry::None, cfg: *cfg }
}

/// Haar element of `GL_n(𝔬)`: uniform entries, rejected until the
/// determinant is a unit.
pub fn haar_gl<E: RingElem, R: Rng + ?Sized>(cfg: &RingCfg, n: usize, rng: &mut R) -> Result<LocalMatrix<E>> {
    for _ in 0..GL_RETRIES {
        let m = haar_m(cfg, n, n, rng);
        if det_valuation(&m).v == 0 {
            return Ok(m);
        }
    }
    Err(Error::Unresolved(format!("no invertible sample in {GL_RETRIES} draws")))
}

/// Haar element of `Alt_size(𝔬)`: i.i.d. entries above the diagonal.
pub fn haar_alt<R: Rng + ?Sized>(cfg: &RingCfg, size: usize, rng: &mut R) -> AltMatrix {
    let mut m = AltMatrix::zeros(cfg, size, size, Symmetry::Alternating);
    for i in 0..size {
        for j in i + 1..size {
            let x = BaseElem::sample(cfg, rng);
            m.set(i, j, x);
            m.set(j, i, -x);
        }
    }
    m
}

/// Haar element of `Her_n(𝔬)`: diagonal from the fixed subring.
pub fn haar_her<R: Rng + ?Sized>(cfg: &RingCfg, n: usize, rng: &mut R) -> HerMatrix {
    let mut m = HerMatrix::zeros(cfg, n, n, Symmetry::Hermitian);
    for i in 0..n {
        m.set(i, i, ExtElem::from_base(BaseElem::sample(cfg, rng)));
        for j in i + 1..n {
            let x = ExtElem::sample(cfg, rng);
            m.set(i, j, x);
            m.set(j, i, x.conj());
        }
    }
    m
}

/// `U π^{alt}_λ U^T` with `U` Haar in `GL_size(𝔬)`.
pub fn invariant_alt<R: Rng + ?Sized>(cfg: &RingCfg, lambda: &Signature, size: usize, rng: &mut R) -> Result<AltMatrix> {
    let c = canonical_alt(cfg, lambda, size)?;
    c.sandwich(&haar_gl::<BaseElem, _>(cfg, size, rng)?.adjoint())
}

/// `U π_λ U^*` with `U` Haar in `GL_n(𝔬_F)`.
pub fn invariant_her<R: Rng + ?Sized>(cfg: &RingCfg, lambda: &Signature, rng: &mut R) -> Result<HerMatrix> {
    let c = canonical_her(cfg, lambda)?;
    c.sandwich(&haar_gl::<ExtElem, _>(cfg, lambda.len(), rng)?.adjoint())
}

/// `U_1 diag(π^{μ_i}) U_2` with `U_1, U_2` Haar: the bi-invariant law with `SN = μ`.
pub fn bi_invariant<E: RingElem, R: Rng + ?Sized>(cfg: &RingCfg, mu: &Signature, rng: &mut R) -> Result<LocalMatrix<E>> {
    let n = mu.len();
    let d = LocalMatrix::<E>::diag_p_powers(cfg, mu.parts())?;
    haar_gl::<E, _>(cfg, n, rng)?.mul(&d)?.mul(&haar_gl::<E, _>(cfg, n, rng)?)
}

/// Singular numbers, with `reliable = false` when some part is only known to
/// be at least `K`; such parts are reported as `K`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SnResult {
    pub signature: Signature,
    pub reliable: bool,
}

impl SnResult {
    fn from_parts(mut parts: Vec<i64>, reliable: bool) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        SnResult { signature: Signature::new(parts).expect("sorted parts"), reliable }
    }
}

/// Valuation of the determinant, by elimination with full pivoting on the
/// entry of least valuation: the pivot valuations are the Smith exponents.
pub fn det_valuation<E: RingElem>(m: &LocalMatrix<E>) -> Val {
    let k = m.cfg.precision();
    let (exps, _) = smith_exponents(m.clone());
    let total: u32 = exps.iter().map(|v| v.v).sum();
    let exact = exps.iter().all(|v| v.exact) && total < k;
    Val { v: total.min(k), exact }
}

/// Entry of least valuation in the block `[from..]×[from..]`, or `None` if the
/// block vanishes mod `p^K`.
fn min_entry<E: RingElem>(m: &LocalMatrix<E>, from: usize, upper_only: bool) -> Option<(usize, usize, u32)> {
    let mut best: Option<(usize, usize, u32)> = None;
    for i in from..m.rows {
        let j0 = if upper_only { i + 1 } else { from };
        for j in j0..m.cols {
            let v = m.get(i, j).valuation();
            if v.exact && best.map_or(true, |b| v.v < b.2) {
                best = Some((i, j, v.v));
                if v.v == 0 {
                    return best;
                }
            }
        }
    }
    best
}

/// `x / y` for `v(x) ≥ v(y) = v`; exact to the precision needed by the
/// elimination, since every entry it multiplies has valuation `≥ v`.
fn quotient<E: RingElem>(x: E, y: E, v: u32) -> E {
    x.div_p_pow(v) * y.div_p_pow(v).inv().expect("pivot has minimal valuation")
}

/// Smith exponents of a square matrix by independent row and column moves.
/// Censored exponents (vanishing residual block) come back as inexact `K`.
fn smith_exponents<E: RingElem>(mut m: LocalMatrix<E>) -> (Vec<Val>, bool) {
    let n = m.rows.min(m.cols);
    let k = m.cfg.precision();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let Some((r, c, v)) = min_entry(&m, i, false) else {
            out.extend((i..n).map(|_| Val { v: k, exact: false }));
            return (out, false);
        };
        m.swap_rows(i, r);
        m.swap_cols(i, c);
        let piv = m.get(i, i);
        for r in i + 1..m.rows {
            let x = quotient(m.get(r, i), piv, v);
            m.add_row(r, i, -x);
        }
        for c in i + 1..m.cols {
            let x = quotient(m.get(i, c), piv, v);
            m.add_col(c, i, -x);
        }
        out.push(Val { v, exact: true });
    }
    (out, true)
}

fn hermitian_exponents<E: RingElem>(mut m: LocalMatrix<E>) -> Result<(Vec<Val>, bool)> {
    let n = m.rows;
    let k = m.cfg.precision();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let Some((r, c, v)) = min_entry(&m, i, false) else {
            out.extend((i..n).map(|_| Val { v: k, exact: false }));
            return Ok((out, false));
        };
        let diag = (i..n).find(|&j| {
            let w = m.get(j, j).valuation();
            w.exact && w.v == v
        });
        let j = match diag {
            Some(j) => j,
            None => {
                // Move the off-diagonal minimum onto the diagonal: with
                // a_rc = π^v w, the new a_rr is π^v Tr(c w^*) mod π^{v+1}, and one
                // of c ∈ {1, s} leaves a unit trace.
                let mut found = false;
                for c_unit in E::pivot_units(&m.cfg) {
                    let mut t = m.clone();
                    t.add_row(r, c, c_unit);
                    t.add_col(r, c, c_unit.conj());
                    let w = t.get(r, r).valuation();
                    if w.exact && w.v == v {
                        m = t;
                        found = true;
                        break;
                    }
                }
                if !found {
                    return Err(Error::Unresolved(format!("no unit multiplier moves valuation {v} onto the diagonal")));
                }
                r
            }
        };
        m.swap_rows(i, j);
        m.swap_cols(i, j);
        let piv = m.get(i, i);
        for r in i + 1..n {
            let x = quotient(m.get(r, i), piv, v);
            m.add_row(r, i, -x);
            m.add_col(r, i, -x.conj());
        }
        out.push(Val { v, exact: true });
    }
    Ok((out, true))
}

fn alternating_exponents<E: RingElem>(mut m: LocalMatrix<E>) -> (Vec<Val>, bool) {
    let size = m.rows;
    let k = m.cfg.precision();
    let mut out = Vec::with_capacity(size / 2);
    let mut i = 0;
    while i + 1 < size {
        let Some((r, c, v)) = min_entry(&m, i, true) else {
            out.extend((0..(size - i) / 2).map(|_| Val { v: k, exact: false }));
            return (out, false);
        };
        m.swap_rows(i, r);
        m.swap_cols(i, r);
        let c = if c == i { r } else { c };
        m.swap_rows(i + 1, c);
        m.swap_cols(i + 1, c);
        let a = m.get(i, i + 1);
        for r in i + 2..size {
            let x = quotient(m.get(r, i + 1), a, v);
            let y = -quotient(m.get(r, i), a, v);
            m.add_row(r, i, -x);
            m.add_row(r, i + 1, -y);
            m.add_col(r, i, -x);
            m.add_col(r, i + 1, -y);
        }
        out.push(Val { v, exact: true });
        i += 2;
    }
    (out, true)
}

fn to_result(exps: Vec<Val>, complete: bool) -> SnResult {
    let parts = exps.iter().map(|v| v.v as i64).collect();
    SnResult::from_parts(parts, complete && exps.iter().all(|v| v.exact))
}

/// Singular numbers by congruence elimination (Smith form for untagged
/// matrices), pivoting on least valuation.
pub fn sn_elim<E: RingElem>(m: &LocalMatrix<E>) -> Result<SnResult> {
    let (exps, complete) = match m.symmetry {
        Symmetry::None => smith_exponents(m.clone()),
        Symmetry::Hermitian => hermitian_exponents(m.clone())?,
        Symmetry::Alternating => alternating_exponents(m.clone()),
    };
    Ok(to_result(exps, complete))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Singular numbers from minors: the sum of the `k` smallest parts is the
/// least valuation of a `k×k` minor (all minors, not only principal ones);
/// for alternating matrices twice that sum is the least valuation of a
/// principal `2k×2k` minor.
pub fn sn_minors<E: RingElem>(m: &LocalMatrix<E>) -> Result<SnResult> {
    let size = m.rows;
    if size > MINORS_BOUND || m.cols > MINORS_BOUND {
        return Err(Error::SpaceTooLarge(format!("minors of a {size}x{} matrix (bound {MINORS_BOUND})", m.cols)));
    }
    let k_prec = m.cfg.precision() as i64;
    let (count, step) = match m.symmetry {
        Symmetry::Alternating => (size / 2, 2),
        _ => (size.min(m.cols), 1),
    };
    let mut sums = vec![0i64];
    let mut reliable = true;
    for k in 1..=count {
        let mut best: Option<Val> = None;
        let row_sets = subsets(size, step * k);
        for rows in &row_sets {
            let col_sets = match m.symmetry {
                Symmetry::Alternating => vec![rows.clone()],
                _ => subsets(m.cols, k),
            };
            for cols in &col_sets {
                let v = det_valuation(&m.submatrix(rows, cols));
                if best.map_or(true, |b| v.exact && (!b.exact || v.v < b.v)) {
                    best = Some(v);
                }
            }
        }
        let best = best.expect("at least one minor");
        if !best.exact {
            reliable = false;
            break;
        }
        let s = if step == 2 {
            if best.v % 2 != 0 {
                return Err(Error::Domain(format!("principal minor valuation {} of an alternating matrix is odd", best.v)));
            }
            best.v as i64 / 2
        } else {
            best.v as i64
        };
        sums.push(s);
    }
    // Parts from the smallest up; censored parts are reported as K.
    let mut parts: Vec<i64> = sums.windows(2).map(|w| w[1] - w[0]).collect();
    while parts.len() < count {
        let last = parts.last().copied().unwrap_or(0);
        parts.push(last.max(k_prec));
    }
    Ok(SnResult::from_parts(parts, reliable))
}
