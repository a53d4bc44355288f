//! Exact arithmetic in truncated discrete valuation rings and their
//! unramified quadratic extensions.
//!
//! Two families are supported: mixed characteristic `Z/p^l` (uniformizer
//! `p`, residue field `F_p`) and equal characteristic `F_q[t]/(t^l)`
//! (uniformizer `t`, residue field `F_q` with `q = p^f`). The quadratic
//! extension adjoins `eps` with `eps^2` a fixed nonsquare unit of the
//! base ring; Galois conjugation negates the `eps` component.
//!
//! Every element is identified by a canonical code: digits are packed
//! little-endian, so for the mixed family the code of an element is its
//! natural integer representative. Equality of ring values is equality
//! of codes, and all deterministic orderings used elsewhere (element
//! tables, class representatives, witnesses) are orderings by code.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Which realization of the truncated valuation ring is in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingFamily {
    /// `Z/p^l`, uniformizer `p`. Requires `f = 1`.
    Mixed,
    /// `F_q[t]/(t^l)`, uniformizer `t`.
    Equal,
}

/// An element of a ring, tagged with the packed descriptor of the ring
/// it belongs to. Elements compare and hash by `(ring, code)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RElem {
    ring: u32,
    code: u64,
}

impl RElem {
    pub fn code(&self) -> u64 {
        self.code
    }

    pub fn ring_key(&self) -> u32 {
        self.ring
    }
}

/// Residue field tables for `F_q`, `q = p^f`. Indices are `sum c_j p^j`
/// over the polynomial coefficients `c_j` of the element.
#[derive(Debug, Clone)]
struct Fq {
    q: u64,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    /// Non-leading coefficients of the minimal polynomial of the
    /// generator (monic, degree `f`).
    #[allow(dead_code)]
    modulus: Vec<u16>,
}

impl Fq {
    fn new(p: u64, f: u32) -> Result<Fq> {
        if f > 3 {
            return Err(Error::InvalidRing(format!(
                "residue degree f = {f} not supported (f <= 3)"
            )));
        }
        let q = p.pow(f);
        let modulus = if f == 1 {
            vec![0u16]
        } else {
            // Least monic irreducible of degree f: for f <= 3 this is
            // exactly "no roots in F_p".
            let mut found = None;
            'search: for c in 0..p.pow(f) {
                let coeffs: Vec<u64> = (0..f).map(|j| (c / p.pow(j)) % p).collect();
                for r in 0..p {
                    let mut v = 1u64; // leading coefficient
                    for j in (0..f).rev() {
                        v = (v * r + coeffs[j as usize]) % p;
                    }
                    if v == 0 {
                        continue 'search;
                    }
                }
                found = Some(coeffs.iter().map(|&c| c as u16).collect::<Vec<u16>>());
                break;
            }
            found.ok_or_else(|| Error::Internal("no irreducible polynomial found".into()))?
        };

        let decompose = |idx: u64| -> Vec<u64> { (0..f).map(|j| (idx / p.pow(j)) % p).collect() };
        let compose = |c: &[u64]| -> u64 { c.iter().rev().fold(0, |acc, &x| acc * p + x) };

        // Reduction of u^k mod the modulus for k in 0..2f-1.
        let mut upow: Vec<Vec<u64>> = Vec::new();
        upow.push({
            let mut v = vec![0u64; f as usize];
            v[0] = 1;
            v
        });
        for k in 1..(2 * f as usize - 1).max(1) {
            let prev = upow[k - 1].clone();
            let mut next = vec![0u64; f as usize];
            let carry = prev[f as usize - 1];
            for j in (1..f as usize).rev() {
                next[j] = prev[j - 1];
            }
            next[0] = 0;
            if carry != 0 {
                for j in 0..f as usize {
                    next[j] = (next[j] + (p - modulus[j] as u64 % p) * carry) % p;
                }
            }
            upow.push(next);
        }

        let mut add = vec![0u16; (q * q) as usize];
        let mut mul = vec![0u16; (q * q) as usize];
        let mut neg = vec![0u16; q as usize];
        let mut inv = vec![0u16; q as usize];
        for a in 0..q {
            let da = decompose(a);
            let nc: Vec<u64> = da.iter().map(|&x| (p - x) % p).collect();
            neg[a as usize] = compose(&nc) as u16;
            for b in 0..q {
                let db = decompose(b);
                let sc: Vec<u64> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = compose(&sc) as u16;
                // convolution then reduce
                let mut conv = vec![0u64; 2 * f as usize - 1];
                for i in 0..f as usize {
                    for j in 0..f as usize {
                        conv[i + j] = (conv[i + j] + da[i] * db[j]) % p;
                    }
                }
                let mut red = vec![0u64; f as usize];
                for (k, &c) in conv.iter().enumerate() {
                    if c != 0 {
                        for j in 0..f as usize {
                            red[j] = (red[j] + c * upow[k][j]) % p;
                        }
                    }
                }
                mul[(a * q + b) as usize] = compose(&red) as u16;
            }
        }
        for a in 1..q {
            for b in 1..q {
                if mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b as u16;
                    break;
                }
            }
        }
        Ok(Fq {
            q,
            add,
            mul,
            neg,
            inv,
            modulus,
        })
    }

    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        self.add[(a * self.q + b) as usize] as u64
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.mul[(a * self.q + b) as usize] as u64
    }

    #[inline]
    fn neg(&self, a: u64) -> u64 {
        self.neg[a as usize] as u64
    }

    #[inline]
    fn inv(&self, a: u64) -> u64 {
        self.inv[a as usize] as u64
    }
}

/// A truncated valuation ring `o_l` or its unramified quadratic
/// extension `O_l`, together with canonical encodings of its elements.
///
/// The descriptor is `(family, p, f, level, extended)`; rings with equal
/// descriptors are interchangeable, and elements carry the packed
/// descriptor so that cross-ring operations are rejected.
#[derive(Debug, Clone)]
pub struct Ring {
    pub family: RingFamily,
    pub p: u64,
    pub f: u32,
    pub level: u32,
    pub extended: bool,
    /// Residue field size `q = p^f`.
    pub q: u64,
    /// `q^level`, the size of the base part.
    base_size: u64,
    /// Canonical nonsquare unit `eps^2` of the base ring (code).
    eps_sq: u64,
    fq: Option<Fq>,
    key: u32,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pack_key(family: RingFamily, p: u64, f: u32, level: u32, extended: bool) -> u32 {
    let fam = match family {
        RingFamily::Mixed => 0u32,
        RingFamily::Equal => 1u32,
    };
    fam | (u32::from(extended) << 1) | (f << 2) | (level << 6) | ((p as u32) << 12)
}

impl Ring {
    /// Construct the ring `o_l` (or `O_l` when `extended`).
    pub fn new(family: RingFamily, p: u64, f: u32, level: u32, extended: bool) -> Result<Ring> {
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidRing(format!("p = {p} must be an odd prime")));
        }
        if f == 0 {
            return Err(Error::InvalidRing("f must be >= 1".into()));
        }
        if family == RingFamily::Mixed && f > 1 {
            return Err(Error::InvalidRing(
                "mixed characteristic requires f = 1".into(),
            ));
        }
        if level == 0 {
            return Err(Error::InvalidRing("level must be >= 1".into()));
        }
        if level > 24 || f > 3 || p > 1 << 19 {
            return Err(Error::InvalidRing("ring parameters out of range".into()));
        }
        let q = p.pow(f);
        let base_size = q
            .checked_pow(level)
            .filter(|&s| s <= 1 << 24)
            .ok_or_else(|| Error::InvalidRing("ring too large".into()))?;
        let fq = match family {
            RingFamily::Mixed => None,
            RingFamily::Equal => Some(Fq::new(p, f)?),
        };
        let mut ring = Ring {
            family,
            p,
            f,
            level,
            extended,
            q,
            base_size,
            eps_sq: 0,
            fq,
            key: pack_key(family, p, f, level, extended),
        };
        ring.eps_sq = ring.find_eps_sq();
        Ok(ring)
    }

    /// The same descriptor at a different truncation level.
    pub fn truncated(&self, level: u32) -> Result<Ring> {
        Ring::new(self.family, self.p, self.f, level, self.extended)
    }

    /// The base ring `o_l` sitting under this ring.
    pub fn base_ring(&self) -> Result<Ring> {
        Ring::new(self.family, self.p, self.f, self.level, false)
    }

    /// The quadratic extension `O_l` of this ring.
    pub fn extension(&self) -> Result<Ring> {
        Ring::new(self.family, self.p, self.f, self.level, true)
    }

    pub fn key(&self) -> u32 {
        self.key
    }

    /// Number of elements: `q^l` for the base ring, `q^(2l)` extended.
    pub fn size(&self) -> u64 {
        if self.extended {
            self.base_size * self.base_size
        } else {
            self.base_size
        }
    }

    pub fn base_size(&self) -> u64 {
        self.base_size
    }

    // ----- base-part arithmetic on raw codes -----

    fn b_digits(&self, mut code: u64) -> Vec<u64> {
        let mut d = Vec::with_capacity(self.level as usize);
        for _ in 0..self.level {
            d.push(code % self.q);
            code /= self.q;
        }
        d
    }

    fn b_from_digits(&self, d: &[u64]) -> u64 {
        d.iter().rev().fold(0, |acc, &x| acc * self.q + x)
    }

    #[inline]
    fn b_add(&self, a: u64, b: u64) -> u64 {
        match self.family {
            RingFamily::Mixed => (a + b) % self.base_size,
            RingFamily::Equal => {
                let fq = self.fq.as_ref().unwrap();
                let (da, db) = (self.b_digits(a), self.b_digits(b));
                let s: Vec<u64> = da.iter().zip(&db).map(|(&x, &y)| fq.add(x, y)).collect();
                self.b_from_digits(&s)
            }
        }
    }

    #[inline]
    fn b_neg(&self, a: u64) -> u64 {
        match self.family {
            RingFamily::Mixed => (self.base_size - a) % self.base_size,
            RingFamily::Equal => {
                let fq = self.fq.as_ref().unwrap();
                let d: Vec<u64> = self.b_digits(a).iter().map(|&x| fq.neg(x)).collect();
                self.b_from_digits(&d)
            }
        }
    }

    #[inline]
    fn b_sub(&self, a: u64, b: u64) -> u64 {
        self.b_add(a, self.b_neg(b))
    }

    #[inline]
    fn b_mul(&self, a: u64, b: u64) -> u64 {
        match self.family {
            RingFamily::Mixed => (a * b) % self.base_size,
            RingFamily::Equal => {
                let fq = self.fq.as_ref().unwrap();
                let (da, db) = (self.b_digits(a), self.b_digits(b));
                let l = self.level as usize;
                let mut out = vec![0u64; l];
                for i in 0..l {
                    if da[i] == 0 {
                        continue;
                    }
                    for j in 0..l - i {
                        out[i + j] = fq.add(out[i + j], fq.mul(da[i], db[j]));
                    }
                }
                self.b_from_digits(&out)
            }
        }
    }

    fn b_is_unit(&self, a: u64) -> bool {
        a % self.q != 0
    }

    fn b_inv(&self, a: u64) -> Option<u64> {
        if !self.b_is_unit(a) {
            return None;
        }
        match self.family {
            RingFamily::Mixed => {
                // extended Euclid mod p^l
                let (mut t, mut new_t): (i128, i128) = (0, 1);
                let (mut r, mut new_r): (i128, i128) = (self.base_size as i128, a as i128);
                while new_r != 0 {
                    let qt = r / new_r;
                    (t, new_t) = (new_t, t - qt * new_t);
                    (r, new_r) = (new_r, r - qt * new_r);
                }
                debug_assert_eq!(r, 1);
                Some(t.rem_euclid(self.base_size as i128) as u64)
            }
            RingFamily::Equal => {
                let fq = self.fq.as_ref().unwrap();
                // Newton lift of the residue inverse.
                let mut v = fq.inv(a % self.q);
                let two = self.b_from_digits(&{
                    let mut d = vec![0u64; self.level as usize];
                    d[0] = 2 % self.p;
                    d
                });
                for _ in 0..self.level.ilog2() + 2 {
                    // v <- v * (2 - a v)
                    v = self.b_mul(v, self.b_sub(two, self.b_mul(a, v)));
                    if self.b_mul(a, v) == self.one_base_code() {
                        break;
                    }
                }
                debug_assert_eq!(self.b_mul(a, v), self.one_base_code());
                Some(v)
            }
        }
    }

    fn b_val(&self, a: u64) -> u32 {
        if a == 0 {
            return self.level;
        }
        let mut v = 0;
        let mut c = a;
        while c % self.q == 0 {
            v += 1;
            c /= self.q;
        }
        v
    }

    fn one_base_code(&self) -> u64 {
        1
    }

    fn pi_base_code(&self) -> u64 {
        // digits (0, 1, 0, ..): code q
        if self.level >= 2 {
            self.q
        } else {
            0
        }
    }

    fn b_from_i64(&self, n: i64) -> u64 {
        match self.family {
            RingFamily::Mixed => n.rem_euclid(self.base_size as i64) as u64,
            RingFamily::Equal => {
                let r = n.rem_euclid(self.p as i64) as u64;
                r // constant digit d0 = r (an F_p scalar inside F_q)
            }
        }
    }

    fn residue_is_square(&self, r: u64) -> bool {
        // r is a unit residue in F_q; Euler criterion via the residue field.
        debug_assert!(r != 0);
        let e = (self.q - 1) / 2;
        match self.family {
            RingFamily::Mixed => {
                let mut acc = 1u64;
                let mut base = r % self.p;
                let mut k = e;
                while k > 0 {
                    if k & 1 == 1 {
                        acc = acc * base % self.p;
                    }
                    base = base * base % self.p;
                    k >>= 1;
                }
                acc == 1
            }
            RingFamily::Equal => {
                let fq = self.fq.as_ref().unwrap();
                let mut acc = 1u64;
                let mut base = r;
                let mut k = e;
                while k > 0 {
                    if k & 1 == 1 {
                        acc = fq.mul(acc, base);
                    }
                    base = fq.mul(base, base);
                    k >>= 1;
                }
                acc == 1
            }
        }
    }

    fn find_eps_sq(&self) -> u64 {
        // least nonsquare unit in canonical (code) order
        for c in 1..self.base_size {
            if self.b_is_unit(c) && !self.residue_is_square(c % self.q) {
                return c;
            }
        }
        unreachable!("every base ring with odd q has a nonsquare unit")
    }

    // ----- full-ring arithmetic on raw codes (extension-aware) -----

    #[inline]
    pub(crate) fn split(&self, code: u64) -> (u64, u64) {
        debug_assert!(self.extended);
        (code / self.base_size, code % self.base_size)
    }

    #[inline]
    fn join(&self, x: u64, y: u64) -> u64 {
        x * self.base_size + y
    }

    #[inline]
    pub(crate) fn c_add(&self, a: u64, b: u64) -> u64 {
        if self.extended {
            let ((ax, ay), (bx, by)) = (self.split(a), self.split(b));
            self.join(self.b_add(ax, bx), self.b_add(ay, by))
        } else {
            self.b_add(a, b)
        }
    }

    #[inline]
    pub(crate) fn c_neg(&self, a: u64) -> u64 {
        if self.extended {
            let (x, y) = self.split(a);
            self.join(self.b_neg(x), self.b_neg(y))
        } else {
            self.b_neg(a)
        }
    }

    #[inline]
    pub(crate) fn c_sub(&self, a: u64, b: u64) -> u64 {
        self.c_add(a, self.c_neg(b))
    }

    #[inline]
    pub(crate) fn c_mul(&self, a: u64, b: u64) -> u64 {
        if self.extended {
            let ((ax, ay), (bx, by)) = (self.split(a), self.split(b));
            let x = self.b_add(
                self.b_mul(ax, bx),
                self.b_mul(self.b_mul(ay, by), self.eps_sq),
            );
            let y = self.b_add(self.b_mul(ax, by), self.b_mul(ay, bx));
            self.join(x, y)
        } else {
            self.b_mul(a, b)
        }
    }

    pub(crate) fn c_inv(&self, a: u64) -> Option<u64> {
        if self.extended {
            let n = self.c_norm(a);
            let ninv = self.b_inv(n)?;
            let (x, y) = self.split(a);
            Some(self.join(self.b_mul(x, ninv), self.b_mul(self.b_neg(y), ninv)))
        } else {
            self.b_inv(a)
        }
    }

    #[inline]
    pub(crate) fn c_val(&self, a: u64) -> u32 {
        if self.extended {
            let (x, y) = self.split(a);
            self.b_val(x).min(self.b_val(y))
        } else {
            self.b_val(a)
        }
    }

    #[inline]
    pub(crate) fn c_is_unit(&self, a: u64) -> bool {
        self.c_val(a) == 0
    }

    #[inline]
    pub(crate) fn c_conj(&self, a: u64) -> u64 {
        debug_assert!(self.extended);
        let (x, y) = self.split(a);
        self.join(x, self.b_neg(y))
    }

    /// Norm to the base ring: `z * conj(z)` as a base code.
    pub(crate) fn c_norm(&self, a: u64) -> u64 {
        debug_assert!(self.extended);
        let (x, y) = self.split(a);
        self.b_sub(
            self.b_mul(x, x),
            self.b_mul(self.b_mul(y, y), self.eps_sq),
        )
    }

    pub(crate) fn c_one(&self) -> u64 {
        if self.extended {
            self.join(1, 0)
        } else {
            1
        }
    }

    pub(crate) fn c_pi(&self) -> u64 {
        let pi = self.pi_base_code();
        if self.extended {
            self.join(pi, 0)
        } else {
            pi
        }
    }

    pub(crate) fn c_from_i64(&self, n: i64) -> u64 {
        let b = self.b_from_i64(n);
        if self.extended {
            self.join(b, 0)
        } else {
            b
        }
    }

    pub(crate) fn c_project(&self, target: &Ring, a: u64) -> u64 {
        let m = target.base_size;
        if self.extended {
            let (x, y) = self.split(a);
            target.join(x % m, y % m)
        } else {
            a % m
        }
    }

    pub(crate) fn c_lift(&self, target: &Ring, a: u64) -> u64 {
        if self.extended {
            let (x, y) = self.split(a);
            target.join(x, y)
        } else {
            a
        }
    }

    // ----- public element API -----

    fn check(&self, a: RElem) -> RElem {
        assert_eq!(a.ring, self.key, "element belongs to a different ring");
        a
    }

    pub fn elem(&self, code: u64) -> RElem {
        assert!(code < self.size());
        RElem {
            ring: self.key,
            code,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = RElem> + '_ {
        (0..self.size()).map(move |c| self.elem(c))
    }

    pub fn units(&self) -> impl Iterator<Item = RElem> + '_ {
        self.elements().filter(move |&e| self.c_is_unit(e.code))
    }

    pub fn zero(&self) -> RElem {
        self.elem(0)
    }

    pub fn one(&self) -> RElem {
        self.elem(self.c_one())
    }

    pub fn pi(&self) -> RElem {
        self.elem(self.c_pi())
    }

    pub fn from_i64(&self, n: i64) -> RElem {
        self.elem(self.c_from_i64(n))
    }

    /// The canonical nonsquare unit `eps^2`, as an element of this ring.
    pub fn epsilon_sq(&self) -> RElem {
        if self.extended {
            self.elem(self.join(self.eps_sq, 0))
        } else {
            self.elem(self.eps_sq)
        }
    }

    pub(crate) fn eps_sq_base_code(&self) -> u64 {
        self.eps_sq
    }

    /// `eps` itself; only exists in the extension ring.
    pub fn epsilon(&self) -> Result<RElem> {
        if !self.extended {
            return Err(Error::NotExtended);
        }
        Ok(self.elem(self.join(0, 1)))
    }

    pub fn add(&self, a: RElem, b: RElem) -> RElem {
        self.elem(self.c_add(self.check(a).code, self.check(b).code))
    }

    pub fn sub(&self, a: RElem, b: RElem) -> RElem {
        self.elem(self.c_sub(self.check(a).code, self.check(b).code))
    }

    pub fn neg(&self, a: RElem) -> RElem {
        self.elem(self.c_neg(self.check(a).code))
    }

    pub fn mul(&self, a: RElem, b: RElem) -> RElem {
        self.elem(self.c_mul(self.check(a).code, self.check(b).code))
    }

    pub fn inv(&self, a: RElem) -> Result<RElem> {
        self.c_inv(self.check(a).code)
            .map(|c| self.elem(c))
            .ok_or(Error::NonUnit)
    }

    /// Valuation: the largest `i <= level` with `a` in `pi^i * ring`;
    /// `val(0) = level` by convention.
    pub fn val(&self, a: RElem) -> u32 {
        self.c_val(self.check(a).code)
    }

    pub fn is_unit(&self, a: RElem) -> bool {
        self.c_is_unit(self.check(a).code)
    }

    /// Natural projection to the ring at a lower level.
    pub fn project(&self, target: &Ring, a: RElem) -> Result<RElem> {
        if a.ring != self.key {
            return Err(Error::RingMismatch);
        }
        if target.family != self.family
            || target.p != self.p
            || target.f != self.f
            || target.extended != self.extended
            || target.level > self.level
        {
            return Err(Error::BadProjection {
                target: target.level,
                level: self.level,
            });
        }
        Ok(target.elem(self.c_project(target, a.code)))
    }

    /// Zero-extension lift to a higher level. Fixes `0` and `eps`,
    /// preserves equal-digit patterns, and satisfies
    /// `project(level) . lift = id`.
    pub fn serre_lift(&self, target: &Ring, a: RElem) -> Result<RElem> {
        if a.ring != self.key {
            return Err(Error::RingMismatch);
        }
        if target.family != self.family
            || target.p != self.p
            || target.f != self.f
            || target.extended != self.extended
            || target.level < self.level
        {
            return Err(Error::BadProjection {
                target: target.level,
                level: self.level,
            });
        }
        Ok(target.elem(self.c_lift(target, a.code)))
    }

    /// Galois conjugation `x + y eps -> x - y eps`.
    pub fn conj(&self, a: RElem) -> Result<RElem> {
        if a.ring != self.key {
            return Err(Error::RingMismatch);
        }
        if !self.extended {
            return Err(Error::NotExtended);
        }
        Ok(self.elem(self.c_conj(a.code)))
    }

    /// Norm `z * conj(z)` into the base ring.
    pub fn norm(&self, a: RElem) -> Result<RElem> {
        if a.ring != self.key {
            return Err(Error::RingMismatch);
        }
        if !self.extended {
            return Err(Error::NotExtended);
        }
        let base = self.base_ring()?;
        Ok(base.elem(self.c_norm(a.code)))
    }

    /// Embed a base-ring element into this extension ring.
    pub fn embed(&self, a: RElem) -> Result<RElem> {
        if !self.extended {
            return Err(Error::NotExtended);
        }
        let base = self.base_ring()?;
        if a.ring != base.key {
            return Err(Error::RingMismatch);
        }
        Ok(self.elem(self.join(a.code, 0)))
    }

    /// All `z` with `z * conj(z) = 1`; has exactly `q^l + q^(l-1)`
    /// elements.
    pub fn norm_one_kernel(&self) -> Result<Vec<RElem>> {
        if !self.extended {
            return Err(Error::NotExtended);
        }
        let one = 1u64;
        Ok((0..self.size())
            .filter(|&c| self.c_norm(c) == one)
            .map(|c| self.elem(c))
            .collect())
    }

    /// Membership in the unit squares `(ring^x)^2`: decided on the
    /// residue field (valid since the level-1 reduction of a unit
    /// square is a residue square and Hensel lifts the converse).
    pub fn is_square(&self, a: RElem) -> bool {
        let a = self.check(a);
        if !self.c_is_unit(a.code) {
            return false;
        }
        if self.extended {
            // Euler criterion in F_{q^2} via level-1 arithmetic.
            let lvl1 = self.truncated(1).expect("level-1 ring");
            let r = self.c_project(&lvl1, a.code);
            let mut acc = lvl1.c_one();
            let mut base = r;
            let mut k = (self.q * self.q - 1) / 2;
            while k > 0 {
                if k & 1 == 1 {
                    acc = lvl1.c_mul(acc, base);
                }
                base = lvl1.c_mul(base, base);
                k >>= 1;
            }
            acc == lvl1.c_one()
        } else {
            self.residue_is_square(a.code % self.q)
        }
    }

    /// A square root of a unit square, canonical as the smaller of the
    /// two roots in code order. `None` when no unit square root exists.
    pub fn sqrt(&self, a: RElem) -> Option<RElem> {
        let a = self.check(a);
        if !self.is_square(a) {
            return None;
        }
        // find a residue square root by scanning level 1
        let lvl1 = self.truncated(1).expect("level-1 ring");
        let r = self.c_project(&lvl1, a.code);
        let mut s0 = None;
        for c in 0..lvl1.size() {
            if lvl1.c_mul(c, c) == r {
                s0 = Some(c);
                break;
            }
        }
        let s0 = s0.expect("residue square root exists for a residue square");
        // Hensel / Newton lift: s <- s - (s^2 - a) / (2 s)
        let mut s = lvl1.c_lift(self, s0);
        let two_inv = self
            .c_inv(self.c_from_i64(2))
            .expect("2 is a unit in odd residue characteristic");
        for _ in 0..=self.level {
            if self.c_mul(s, s) == a.code {
                break;
            }
            let num = self.c_sub(self.c_mul(s, s), a.code);
            let dsinv = self
                .c_inv(self.c_mul(s, self.c_from_i64(2)))
                .expect("2s is a unit");
            s = self.c_sub(s, self.c_mul(num, dsinv));
            let _ = two_inv;
        }
        assert_eq!(self.c_mul(s, s), a.code, "Hensel lift must converge");
        let t = self.c_neg(s);
        Some(self.elem(s.min(t)))
    }

    /// Exponent data `(n, ord)` of the fixed primitive additive
    /// character at this element: `psi(a)` is the `n`-th power of a
    /// primitive `ord`-th root of unity. Mixed characteristic uses the
    /// integer representative mod `p^l` (`ord = p^l`); equal
    /// characteristic uses the `F_p`-trace of the top digit
    /// (`ord = p`). On the extension ring, `psi(x + y eps) =
    /// psi'(x) psi'(y)`, so the component exponents add.
    pub fn psi_exponent(&self, a: RElem) -> (u64, u64) {
        let a = self.check(a);
        let comp = |c: u64| -> (u64, u64) {
            match self.family {
                RingFamily::Mixed => (c, self.base_size),
                RingFamily::Equal => {
                    let top = c / self.q.pow(self.level - 1);
                    let fq = self.fq.as_ref().unwrap();
                    // trace to F_p: sum of Frobenius powers
                    let mut t = 0u64;
                    let mut frob = top;
                    for _ in 0..self.f {
                        t = fq.add(t, frob);
                        let mut pw = frob;
                        for _ in 1..self.p {
                            pw = fq.mul(pw, frob);
                        }
                        frob = pw;
                    }
                    debug_assert!(t < self.p, "trace lands in the prime field");
                    (t, self.p)
                }
            }
        };
        if self.extended {
            let (x, y) = self.split(a.code);
            let (ex, ord) = comp(x);
            let (ey, _) = comp(y);
            ((ex + ey) % ord, ord)
        } else {
            comp(a.code)
        }
    }

    /// Digit data of an element: base digits, or the `(x, y)` digit
    /// pair for the extension ring.
    pub fn digits(&self, a: RElem) -> Vec<Vec<u64>> {
        let a = self.check(a);
        if self.extended {
            let (x, y) = self.split(a.code);
            vec![self.b_digits(x), self.b_digits(y)]
        } else {
            vec![self.b_digits(a.code)]
        }
    }

    /// Compact display form: digits little-endian joined by `.`, the
    /// extension pair as `x;y`.
    pub fn elem_string(&self, a: RElem) -> String {
        let ds = self.digits(a);
        let fmt = |d: &[u64]| {
            d.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(".")
        };
        if ds.len() == 2 {
            format!("{};{}", fmt(&ds[0]), fmt(&ds[1]))
        } else {
            fmt(&ds[0])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z9() -> Ring {
        Ring::new(RingFamily::Mixed, 3, 1, 2, false).unwrap()
    }

    fn o2ext() -> Ring {
        Ring::new(RingFamily::Mixed, 3, 1, 2, true).unwrap()
    }

    #[test]
    fn make_ring_basic() {
        let r = z9();
        assert_eq!(r.size(), 9);
        let f3 = Ring::new(RingFamily::Mixed, 3, 1, 1, false).unwrap();
        assert_eq!(f3.size(), 3);
        assert_eq!(f3.epsilon_sq().code(), 2);
        assert_eq!(o2ext().size(), 81);
    }

    #[test]
    fn make_ring_rejections() {
        assert!(Ring::new(RingFamily::Mixed, 2, 1, 1, false).is_err());
        assert!(Ring::new(RingFamily::Mixed, 9, 1, 1, false).is_err());
        assert!(Ring::new(RingFamily::Mixed, 3, 2, 1, false).is_err());
        assert!(Ring::new(RingFamily::Mixed, 3, 1, 0, false).is_err());
    }

    #[test]
    fn arithmetic_examples_z9() {
        let r = z9();
        assert_eq!(r.inv(r.from_i64(2)).unwrap(), r.from_i64(5));
        assert_eq!(r.val(r.from_i64(6)), 1);
        assert_eq!(r.val(r.zero()), 2);
        let f3 = r.truncated(1).unwrap();
        assert_eq!(r.project(&f3, r.from_i64(7)).unwrap(), f3.from_i64(1));
        assert!(r.inv(r.from_i64(3)).is_err());
        assert!(r.project(&z9(), f3.one()).is_err());
    }

    #[test]
    fn units_and_valuation_exhaustive() {
        for (fam, p, f, l) in [
            (RingFamily::Mixed, 3, 1, 2),
            (RingFamily::Mixed, 5, 1, 2),
            (RingFamily::Equal, 3, 1, 2),
            (RingFamily::Equal, 3, 2, 2),
        ] {
            let r = Ring::new(fam, p, f, l, false).unwrap();
            for u in r.units() {
                assert_eq!(r.mul(u, r.inv(u).unwrap()), r.one());
            }
            for a in r.elements() {
                for b in r.elements() {
                    let lhs = r.val(r.mul(a, b));
                    let rhs = (r.val(a) + r.val(b)).min(r.level);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn galois_conjugation() {
        let e = o2ext();
        let eps = e.epsilon().unwrap();
        assert_eq!(e.conj(eps).unwrap(), e.neg(eps));
        // conj is an involutive ring automorphism
        for z in e.elements() {
            assert_eq!(e.conj(e.conj(z).unwrap()).unwrap(), z);
        }
        for z in e.elements().step_by(7) {
            for w in e.elements().step_by(5) {
                assert_eq!(
                    e.conj(e.mul(z, w)).unwrap(),
                    e.mul(e.conj(z).unwrap(), e.conj(w).unwrap())
                );
            }
        }
        assert!(z9().conj(z9().one()).is_err());
    }

    #[test]
    fn norm_one_kernel_sizes() {
        let e = o2ext();
        assert_eq!(e.norm_one_kernel().unwrap().len(), 12); // q^l + q^(l-1)
        let e1 = Ring::new(RingFamily::Mixed, 3, 1, 1, true).unwrap();
        assert_eq!(e1.norm_one_kernel().unwrap().len(), 4);
        let e5 = Ring::new(RingFamily::Mixed, 5, 1, 1, true).unwrap();
        assert_eq!(e5.norm_one_kernel().unwrap().len(), 6);
        let eq9 = Ring::new(RingFamily::Equal, 3, 2, 1, true).unwrap();
        assert_eq!(eq9.norm_one_kernel().unwrap().len(), 10);
    }

    #[test]
    fn norm_multiplicative_and_fibers() {
        let e = o2ext();
        let base = e.base_ring().unwrap();
        for z in e.elements().step_by(3) {
            for w in e.elements().step_by(5) {
                assert_eq!(
                    e.norm(e.mul(z, w)).unwrap(),
                    base.mul(e.norm(z).unwrap(), e.norm(w).unwrap())
                );
            }
        }
        // on units the norm is onto the base units with constant fibers
        let mut fiber = std::collections::HashMap::new();
        for z in e.units() {
            *fiber.entry(e.norm(z).unwrap()).or_insert(0u64) += 1;
        }
        assert_eq!(fiber.len(), base.units().count());
        assert!(fiber.values().all(|&c| c == 12));
    }

    #[test]
    fn square_detection_matches_exhaustive() {
        for (p, l) in [(3u64, 1u32), (3, 2), (5, 1), (5, 2)] {
            let r = Ring::new(RingFamily::Mixed, p, 1, l, false).unwrap();
            let squares: std::collections::HashSet<u64> =
                r.units().map(|u| r.mul(u, u).code()).collect();
            for a in r.elements() {
                assert_eq!(r.is_square(a), squares.contains(&a.code()), "p={p} l={l}");
                if let Some(w) = r.sqrt(a) {
                    assert_eq!(r.mul(w, w), a);
                }
            }
        }
    }

    #[test]
    fn sqrt_witness_canonical() {
        let r = z9();
        let w = r.sqrt(r.from_i64(4)).unwrap();
        assert_eq!(w, r.from_i64(2));
    }

    #[test]
    fn lift_project_roundtrip() {
        let r = z9();
        let r4 = r.truncated(4).unwrap();
        for a in r.elements() {
            let lifted = r.serre_lift(&r4, a).unwrap();
            assert_eq!(r4.project(&r, lifted).unwrap(), a);
        }
        // the lift fixes 0 and eps
        let e = o2ext();
        let e4 = e.truncated(4).unwrap();
        assert_eq!(e.serre_lift(&e4, e.zero()).unwrap(), e4.zero());
        assert_eq!(
            e.serre_lift(&e4, e.epsilon().unwrap()).unwrap(),
            e4.epsilon().unwrap()
        );
    }

    #[test]
    fn extension_epsilon_square() {
        let e = o2ext();
        let eps = e.epsilon().unwrap();
        assert_eq!(e.mul(eps, eps), e.epsilon_sq());
        // eps^2 = 2 in Z/9 under the canonical choice
        assert_eq!(e.epsilon_sq().code(), e.from_i64(2).code());
    }

    #[test]
    fn equal_char_f2_field() {
        let r = Ring::new(RingFamily::Equal, 3, 2, 1, false).unwrap();
        assert_eq!(r.size(), 9);
        for u in r.units() {
            assert_eq!(r.mul(u, r.inv(u).unwrap()), r.one());
        }
        // multiplicative group is cyclic of order 8
        let mut orders = std::collections::HashSet::new();
        for u in r.units() {
            let mut k = 1;
            let mut acc = u;
            while acc != r.one() {
                acc = r.mul(acc, u);
                k += 1;
            }
            orders.insert(k);
        }
        assert!(orders.contains(&8));
    }
}
