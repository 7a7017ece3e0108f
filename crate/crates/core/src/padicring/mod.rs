//! Truncated p-adic integers `ℤ/p^K` and the unramified quadratic extension
//! `(ℤ/p^K)[s]/(s² - d)`.
//!
//! Elements carry their [`RingCfg`], so arithmetic is plain operator syntax.
//! Mixing elements of different rings panics.

use crate::{Error, Result};
use num_integer::Integer;
use rand::Rng;
use serde::Serialize;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RingCfg {
    p: u64,
    k: u32,
    d: u64,
    modulus: u64,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|i| i * i <= p).all(|i| p % i != 0)
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128 % m as u128;
    let mut b128 = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b128 % m as u128;
        }
        b128 = b128 * b128 % m as u128;
        e >>= 1;
    }
    acc as u64
}

fn is_nonresidue(d: u64, p: u64) -> bool {
    d % p != 0 && pow_mod(d, (p - 1) / 2, p) == p - 1
}

impl RingCfg {
    /// `p` odd prime, `K ≥ 1`, `d` the smallest positive non-residue.
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) || p == 2 {
            return Err(Error::RingConfig(format!("p = {p} must be an odd prime")));
        }
        let d = (2..p).find(|&d| is_nonresidue(d, p)).expect("odd primes have non-residues");
        Self::with_nonresidue(p, k, d)
    }

    pub fn with_nonresidue(p: u64, k: u32, d: u64) -> Result<Self> {
        if !is_prime(p) || p == 2 {
            return Err(Error::RingConfig(format!("p = {p} must be an odd prime")));
        }
        if k == 0 {
            return Err(Error::RingConfig("precision K must be at least 1".into()));
        }
        let modulus = p
            .checked_pow(k)
            .filter(|m| *m < 1 << 62)
            .ok_or_else(|| Error::RingConfig(format!("p^K = {p}^{k} is too large")))?;
        if !is_nonresidue(d, p) {
            return Err(Error::RingConfig(format!("d = {d} is not a non-residue mod {p}")));
        }
        Ok(RingCfg { p, k, d: d % modulus, modulus })
    }

    /// `ℤ/p^K` for any prime `p`, without the quadratic extension. Used by the
    /// exhaustive oracles, which also cover `p = 2`.
    pub fn base_ring(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::RingConfig(format!("p = {p} must be prime")));
        }
        if p != 2 {
            return Self::new(p, k);
        }
        if k == 0 || k >= 62 {
            return Err(Error::RingConfig(format!("precision {k} out of range")));
        }
        Ok(RingCfg { p, k, d: 0, modulus: 1 << k })
    }

    /// Whether `d` is set, so that extension elements make sense.
    pub fn has_extension(&self) -> bool {
        self.d != 0
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.k
    }

    pub fn nonresidue(&self) -> u64 {
        self.d
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn base(&self, x: i64) -> BaseElem {
        BaseElem::new(*self, x)
    }

    pub fn ext(&self, a: i64, b: i64) -> ExtElem {
        assert!(self.has_extension(), "no quadratic extension over p = {}", self.p);
        ExtElem { a: self.base(a), b: self.base(b) }
    }

    /// `p^e`, zero once `e ≥ K`.
    pub fn p_pow(&self, e: u32) -> BaseElem {
        let r = if e >= self.k { 0 } else { self.p.pow(e) };
        BaseElem { r, cfg: *self }
    }
}

/// Valuation of a truncated element. When `exact` is false the element is
/// zero mod `p^K` and `v = K` only bounds the true valuation from below.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Val {
    pub v: u32,
    pub exact: bool,
}

impl Val {
    fn of_residue(r: u64, cfg: &RingCfg) -> Val {
        if r == 0 {
            return Val { v: cfg.k, exact: false };
        }
        let mut v = 0;
        let mut r = r;
        while r % cfg.p == 0 {
            r /= cfg.p;
            v += 1;
        }
        Val { v, exact: true }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BaseElem {
    r: u64,
    cfg: RingCfg,
}

impl BaseElem {
    pub fn new(cfg: RingCfg, x: i64) -> Self {
        let r = x.rem_euclid(cfg.modulus as i64) as u64;
        BaseElem { r, cfg }
    }

    /// Canonical residue in `[0, p^K)`.
    pub fn residue(&self) -> u64 {
        self.r
    }

    pub fn cfg(&self) -> &RingCfg {
        &self.cfg
    }

    pub fn valuation(&self) -> Val {
        Val::of_residue(self.r, &self.cfg)
    }

    pub fn is_zero(&self) -> bool {
        self.r == 0
    }

    pub fn is_unit(&self) -> bool {
        self.r % self.cfg.p != 0
    }

    pub fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NonUnit);
        }
        let g = (self.r as i128).extended_gcd(&(self.cfg.modulus as i128));
        debug_assert_eq!(g.gcd, 1);
        Ok(BaseElem { r: g.x.rem_euclid(self.cfg.modulus as i128) as u64, cfg: self.cfg })
    }

    /// `x / p^e` for `v(x) ≥ e`, lifted from `ℤ/p^{K-e}`.
    pub fn div_p_pow(&self, e: u32) -> Self {
        debug_assert!(self.is_zero() || self.valuation().v >= e);
        BaseElem { r: self.r / self.cfg.p.pow(e.min(self.cfg.k)), cfg: self.cfg }
    }

    pub fn sample<R: Rng + ?Sized>(cfg: &RingCfg, rng: &mut R) -> Self {
        BaseElem { r: rng.gen_range(0..cfg.modulus), cfg: *cfg }
    }

    pub fn sample_unit<R: Rng + ?Sized>(cfg: &RingCfg, rng: &mut R) -> Self {
        loop {
            let x = Self::sample(cfg, rng);
            if x.is_unit() {
                return x;
            }
        }
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.cfg, o.cfg, "elements of different rings");
    }
}

impl Add for BaseElem {
    type Output = BaseElem;
    fn add(self, o: Self) -> Self {
        self.check(&o);
        let r = ((self.r as u128 + o.r as u128) % self.cfg.modulus as u128) as u64;
        BaseElem { r, cfg: self.cfg }
    }
}

impl Sub for BaseElem {
    type Output = BaseElem;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for BaseElem {
    type Output = BaseElem;
    fn neg(self) -> Self {
        let r = if self.r == 0 { 0 } else { self.cfg.modulus - self.r };
        BaseElem { r, cfg: self.cfg }
    }
}

impl Mul for BaseElem {
    type Output = BaseElem;
    fn mul(self, o: Self) -> Self {
        self.check(&o);
        let r = ((self.r as u128 * o.r as u128) % self.cfg.modulus as u128) as u64;
        BaseElem { r, cfg: self.cfg }
    }
}

impl fmt::Debug for BaseElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.r)
    }
}

impl fmt::Display for BaseElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.r)
    }
}

/// `a + b s` with `s² = d`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExtElem {
    pub a: BaseElem,
    pub b: BaseElem,
}

/// Conjugate, trace and norm of an extension element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InvolutionOps {
    pub conj: ExtElem,
    pub trace: BaseElem,
    pub norm: BaseElem,
}

impl ExtElem {
    pub fn from_base(a: BaseElem) -> Self {
        ExtElem { a, b: BaseElem { r: 0, cfg: a.cfg } }
    }

    /// The square root `s` of the non-residue.
    pub fn s(cfg: &RingCfg) -> Self {
        cfg.ext(0, 1)
    }

    pub fn cfg(&self) -> &RingCfg {
        &self.a.cfg
    }

    /// Unramified, so `v(a + b s) = min(v(a), v(b))`.
    pub fn valuation(&self) -> Val {
        let (x, y) = (self.a.valuation(), self.b.valuation());
        if x.v <= y.v {
            x
        } else {
            y
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.a.is_unit() || self.b.is_unit()
    }

    /// In the fixed subring `b = 0`.
    pub fn is_real(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        ExtElem { a: self.a, b: -self.b }
    }

    pub fn trace(&self) -> BaseElem {
        self.a + self.a
    }

    pub fn norm(&self) -> BaseElem {
        let d = BaseElem { r: self.a.cfg.d, cfg: self.a.cfg };
        self.a * self.a - d * self.b * self.b
    }

    pub fn involution_ops(&self) -> InvolutionOps {
        InvolutionOps { conj: self.conj(), trace: self.trace(), norm: self.norm() }
    }

    /// `x^{-1} = x^* / Nm(x)`; `Nm(x)` is a unit exactly when `x` is, since `d`
    /// is a non-residue.
    pub fn inv(&self) -> Result<Self> {
        let n = self.norm().inv()?;
        let c = self.conj();
        Ok(ExtElem { a: c.a * n, b: c.b * n })
    }

    pub fn div_p_pow(&self, e: u32) -> Self {
        ExtElem { a: self.a.div_p_pow(e), b: self.b.div_p_pow(e) }
    }

    pub fn sample<R: Rng + ?Sized>(cfg: &RingCfg, rng: &mut R) -> Self {
        let a = BaseElem::sample(cfg, rng);
        ExtElem { a, b: BaseElem::sample(cfg, rng) }
    }

    pub fn sample_unit<R: Rng + ?Sized>(cfg: &RingCfg, rng: &mut R) -> Self {
        loop {
            let x = Self::sample(cfg, rng);
            if x.is_unit() {
                return x;
            }
        }
    }
}

impl Add for ExtElem {
    type Output = ExtElem;
    fn add(self, o: Self) -> Self {
        ExtElem { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Sub for ExtElem {
    type Output = ExtElem;
    fn sub(self, o: Self) -> Self {
        ExtElem { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Neg for ExtElem {
    type Output = ExtElem;
    fn neg(self) -> Self {
        ExtElem { a: -self.a, b: -self.b }
    }
}

impl Mul for ExtElem {
    type Output = ExtElem;
    fn mul(self, o: Self) -> Self {
        let d = BaseElem { r: self.a.cfg.d, cfg: self.a.cfg };
        ExtElem { a: self.a * o.a + d * self.b * o.b, b: self.a * o.b + self.b * o.a }
    }
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}s", self.a, self.b)
    }
}

impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}s", self.a, self.b)
    }
}

/// Operations shared by base and extension elements, used by the matrix code.
pub trait RingElem:
    Copy + PartialEq + fmt::Debug + fmt::Display + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero(cfg: &RingCfg) -> Self;
    fn one(cfg: &RingCfg) -> Self;
    fn from_base(x: BaseElem) -> Self;
    fn ring(&self) -> &RingCfg;
    fn valuation(&self) -> Val;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Result<Self>;
    fn conj(&self) -> Self;
    fn div_p_pow(&self, e: u32) -> Self;
    fn sample<R: Rng + ?Sized>(cfg: &RingCfg, rng: &mut R) -> Self;
    /// Unit multipliers tried when moving minimal valuation onto the diagonal.
    fn pivot_units(cfg: &RingCfg) -> Vec<Self>;
}

impl RingElem for BaseElem {
    fn zero(cfg: &RingCfg) -> Self {
        cfg.base(0)
    }
    fn one(cfg: &RingCfg) -> Self {
        cfg.base(1)
    }
    fn from_base(x: BaseElem) -> Self {
        x
    }
    fn ring(&self) -> &RingCfg {
        &self.cfg
    }
    fn valuation(&self) -> Val {
        BaseElem::valuation(self)
    }
    fn is_zero(&self) -> bool {
        BaseElem::is_zero(self)
    }
    fn inv(&self) -> Result<Self> {
        BaseElem::inv(self)
    }
    fn conj(&self) -> Self {
        *self
    }
    fn div_p_pow(&self, e: u32) -> Self {
        BaseElem::div_p_pow(self, e)
    }
    fn sample<R: Rng + ?Sized>(cfg: &RingCfg, rng: &mut R) -> Self {
        BaseElem::sample(cfg, rng)
    }
    fn pivot_units(cfg: &RingCfg) -> Vec<Self> {
        vec![cfg.base(1)]
    }
}

impl RingElem for ExtElem {
    fn zero(cfg: &RingCfg) -> Self {
        cfg.ext(0, 0)
    }
    fn one(cfg: &RingCfg) -> Self {
        cfg.ext(1, 0)
    }
    fn from_base(x: BaseElem) -> Self {
        ExtElem::from_base(x)
    }
    fn ring(&self) -> &RingCfg {
        self.cfg()
    }
    fn valuation(&self) -> Val {
        ExtElem::valuation(self)
    }
    fn is_zero(&self) -> bool {
        ExtElem::is_zero(self)
    }
    fn inv(&self) -> Result<Self> {
        ExtElem::inv(self)
    }
    fn conj(&self) -> Self {
        ExtElem::conj(self)
    }
    fn div_p_pow(&self, e: u32) -> Self {
        ExtElem::div_p_pow(self, e)
    }
    fn sample<R: Rng + ?Sized>(cfg: &RingCfg, rng: &mut R) -> Self {
        ExtElem::sample(cfg, rng)
    }
    fn pivot_units(cfg: &RingCfg) -> Vec<Self> {
        vec![cfg.ext(1, 0), cfg.ext(0, 1)]
    }
}
