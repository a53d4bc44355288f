//! 2x2 matrix algebra over a truncated valuation ring, the star
//! involution, and exhaustive enumeration of `GL2(o_l)` and `GU2(o_l)`.
//!
//! `GL2(o_l)` lives over the base ring; `GU2(o_l)` is the unitary group
//! of the Hermitian form `<u, v> = v1° u2 + v2° u1` inside
//! `GL2(O_l)`, cut out by `A* A = I` where
//! `[[a,b],[c,d]]* = [[d°,b°],[c°,a°]]`.

use crate::rings::{RElem, Ring};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};

/// A 2x2 matrix with entries in one ring, stored row-major as raw codes.
/// Matrices order lexicographically on `(a11, a12, a21, a22)`, which is
/// the canonical element order used for all tables and witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mat2 {
    ring: u32,
    e: [u64; 4],
}

impl Mat2 {
    pub fn new(ring: &Ring, entries: [RElem; 4]) -> Mat2 {
        for x in &entries {
            assert_eq!(x.ring_key(), ring.key(), "entry from a different ring");
        }
        Mat2 {
            ring: ring.key(),
            e: [
                entries[0].code(),
                entries[1].code(),
                entries[2].code(),
                entries[3].code(),
            ],
        }
    }

    pub(crate) fn from_codes(ring: &Ring, e: [u64; 4]) -> Mat2 {
        Mat2 { ring: ring.key(), e }
    }

    pub(crate) fn codes(&self) -> [u64; 4] {
        self.e
    }

    pub fn ring_key(&self) -> u32 {
        self.ring
    }

    pub fn entry(&self, ring: &Ring, row: usize, col: usize) -> RElem {
        assert_eq!(self.ring, ring.key());
        ring.elem(self.e[2 * row + col])
    }

    pub fn entries(&self, ring: &Ring) -> [RElem; 4] {
        assert_eq!(self.ring, ring.key());
        [
            ring.elem(self.e[0]),
            ring.elem(self.e[1]),
            ring.elem(self.e[2]),
            ring.elem(self.e[3]),
        ]
    }
}

pub fn identity(ring: &Ring) -> Mat2 {
    Mat2::from_codes(ring, [ring.c_one(), 0, 0, ring.c_one()])
}

/// The longest Weyl element `W = [[0,1],[1,0]]`.
pub fn weyl(ring: &Ring) -> Mat2 {
    Mat2::from_codes(ring, [0, ring.c_one(), ring.c_one(), 0])
}

pub fn mat_add(ring: &Ring, x: &Mat2, y: &Mat2) -> Mat2 {
    check2(ring, x, y);
    let mut e = [0u64; 4];
    for i in 0..4 {
        e[i] = ring.c_add(x.e[i], y.e[i]);
    }
    Mat2::from_codes(ring, e)
}

pub fn mat_neg(ring: &Ring, x: &Mat2) -> Mat2 {
    check1(ring, x);
    let mut e = [0u64; 4];
    for i in 0..4 {
        e[i] = ring.c_neg(x.e[i]);
    }
    Mat2::from_codes(ring, e)
}

pub fn mat_sub(ring: &Ring, x: &Mat2, y: &Mat2) -> Mat2 {
    mat_add(ring, x, &mat_neg(ring, y))
}

pub fn mat_mul(ring: &Ring, x: &Mat2, y: &Mat2) -> Mat2 {
    check2(ring, x, y);
    let [a, b, c, d] = x.e;
    let [e, f, g, h] = y.e;
    Mat2::from_codes(
        ring,
        [
            ring.c_add(ring.c_mul(a, e), ring.c_mul(b, g)),
            ring.c_add(ring.c_mul(a, f), ring.c_mul(b, h)),
            ring.c_add(ring.c_mul(c, e), ring.c_mul(d, g)),
            ring.c_add(ring.c_mul(c, f), ring.c_mul(d, h)),
        ],
    )
}

pub fn scalar_mul(ring: &Ring, s: RElem, x: &Mat2) -> Mat2 {
    check1(ring, x);
    let sc = s.code();
    let mut e = [0u64; 4];
    for i in 0..4 {
        e[i] = ring.c_mul(sc, x.e[i]);
    }
    Mat2::from_codes(ring, e)
}

pub fn det(ring: &Ring, x: &Mat2) -> RElem {
    check1(ring, x);
    ring.elem(ring.c_sub(ring.c_mul(x.e[0], x.e[3]), ring.c_mul(x.e[1], x.e[2])))
}

pub fn tr(ring: &Ring, x: &Mat2) -> RElem {
    check1(ring, x);
    ring.elem(ring.c_add(x.e[0], x.e[3]))
}

/// Exact inverse by the adjugate formula; requires a unit determinant.
pub fn mat_inv(ring: &Ring, x: &Mat2) -> Result<Mat2> {
    check1(ring, x);
    let d = det(ring, x).code();
    let dinv = ring.c_inv(d).ok_or(Error::SingularMatrix)?;
    Ok(Mat2::from_codes(
        ring,
        [
            ring.c_mul(dinv, x.e[3]),
            ring.c_mul(dinv, ring.c_neg(x.e[1])),
            ring.c_mul(dinv, ring.c_neg(x.e[2])),
            ring.c_mul(dinv, x.e[0]),
        ],
    ))
}

pub fn mat_pow(ring: &Ring, x: &Mat2, mut k: u64) -> Mat2 {
    let mut acc = identity(ring);
    let mut base = *x;
    while k > 0 {
        if k & 1 == 1 {
            acc = mat_mul(ring, &acc, &base);
        }
        base = mat_mul(ring, &base, &base);
        k >>= 1;
    }
    acc
}

/// The star involution `[[a,b],[c,d]] -> [[d°,b°],[c°,a°]]`
/// (conjugate-transpose twisted by the Weyl element).
pub fn star(ring: &Ring, x: &Mat2) -> Result<Mat2> {
    check1(ring, x);
    if !ring.extended {
        return Err(Error::NotExtended);
    }
    Ok(Mat2::from_codes(
        ring,
        [
            ring.c_conj(x.e[3]),
            ring.c_conj(x.e[1]),
            ring.c_conj(x.e[2]),
            ring.c_conj(x.e[0]),
        ],
    ))
}

fn check1(ring: &Ring, x: &Mat2) {
    assert_eq!(x.ring, ring.key(), "matrix from a different ring");
}

fn check2(ring: &Ring, x: &Mat2, y: &Mat2) {
    check1(ring, x);
    check1(ring, y);
}

/// Which of the two group schemes a handle realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Gl2,
    Gu2,
}

impl GroupKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            GroupKind::Gl2 => "gl2",
            GroupKind::Gu2 => "gu2",
        }
    }

    /// The sign `dG`: `-1` for `GL2`, `+1` for `GU2`.
    pub fn partial_sign(&self) -> i64 {
        match self {
            GroupKind::Gl2 => -1,
            GroupKind::Gu2 => 1,
        }
    }
}

/// `|GL2(o_l)| = q^(4l-3) (q-1)(q^2-1)`,
/// `|GU2(o_l)| = q^(4l-3) (q-1)(q+1)^2`.
pub fn order_formula(kind: GroupKind, q: u64, level: u32) -> u128 {
    let q = q as u128;
    let head = crate::pow_u128(q, 4 * level - 3);
    match kind {
        GroupKind::Gl2 => head * (q - 1) * (q * q - 1),
        GroupKind::Gu2 => head * (q - 1) * (q + 1) * (q + 1),
    }
}

/// Membership predicate: unit determinant, plus `A* A = I` for `GU2`.
pub fn is_member(ring: &Ring, kind: GroupKind, x: &Mat2) -> bool {
    if x.ring != ring.key() {
        return false;
    }
    if !ring.c_is_unit(det(ring, x).code()) {
        return false;
    }
    match kind {
        GroupKind::Gl2 => !ring.extended,
        GroupKind::Gu2 => {
            if !ring.extended {
                return false;
            }
            let s = star(ring, x).expect("extension ring");
            mat_mul(ring, &s, x) == identity(ring)
        }
    }
}

/// Membership in the Lie algebra: all of `M2` for `gl2`,
/// anti-Hermitian (`A + A* = 0`) for `gu2`.
pub fn is_lie_member(ring: &Ring, kind: GroupKind, x: &Mat2) -> bool {
    if x.ring != ring.key() {
        return false;
    }
    match kind {
        GroupKind::Gl2 => !ring.extended,
        GroupKind::Gu2 => {
            if !ring.extended {
                return false;
            }
            let s = star(ring, x).expect("extension ring");
            mat_add(ring, x, &s).e == [0, 0, 0, 0]
        }
    }
}

/// Budget-checked Lie-algebra enumeration: refuses when
/// `|g(o_m)| = q^(4m)` exceeds the budget.
pub fn lie_algebra_budgeted(ring: &Ring, kind: GroupKind, budget: u64) -> Result<Vec<Mat2>> {
    let size = crate::pow_u128(ring.q as u128, 4 * ring.level);
    if size > budget as u128 {
        return Err(Error::BudgetExceeded {
            required: size,
            budget,
        });
    }
    Ok(lie_algebra(ring, kind))
}

/// Enumerate `g(o_m)` in canonical order: `gl2` is every matrix,
/// `gu2` is parametrized by `(a, b', c')` with second diagonal `-a°`
/// and off-diagonal entries `eps b'`, `eps c'` over the base ring.
pub fn lie_algebra(ring: &Ring, kind: GroupKind) -> Vec<Mat2> {
    let mut out = Vec::new();
    match kind {
        GroupKind::Gl2 => {
            assert!(!ring.extended);
            let s = ring.size();
            for a in 0..s {
                for b in 0..s {
                    for c in 0..s {
                        for d in 0..s {
                            out.push(Mat2::from_codes(ring, [a, b, c, d]));
                        }
                    }
                }
            }
        }
        GroupKind::Gu2 => {
            assert!(ring.extended);
            let eps = ring.epsilon().expect("extension").code();
            let s = ring.base_size();
            for a in 0..ring.size() {
                let d = ring.c_neg(ring.c_conj(a));
                for bp in 0..s {
                    let b = ring.c_mul(eps, bp * s); // embed bp, multiply by eps
                    for cp in 0..s {
                        let c = ring.c_mul(eps, cp * s);
                        out.push(Mat2::from_codes(ring, [a, b, c, d]));
                    }
                }
            }
            out.sort_unstable();
        }
    }
    out
}

/// An enumerated, indexed realization of `GL2(o_l)` or `GU2(o_l)`.
///
/// The element table is in canonical order; handles are immutable after
/// construction and safe to share between threads.
#[derive(Debug)]
pub struct GroupHandle {
    pub ring: Ring,
    pub kind: GroupKind,
    pub order: u64,
    elements: Vec<Mat2>,
    index: HashMap<Mat2, u32>,
    inverse: Vec<u32>,
    generators: Vec<u32>,
    identity_idx: u32,
}

impl GroupHandle {
    /// Exhaustively enumerate the group. Refuses when the closed-form
    /// order exceeds `budget`.
    pub fn enumerate(ring: Ring, kind: GroupKind, budget: u64) -> Result<GroupHandle> {
        match kind {
            GroupKind::Gl2 => {
                if ring.extended {
                    return Err(Error::NotBase);
                }
            }
            GroupKind::Gu2 => {
                if !ring.extended {
                    return Err(Error::NotExtended);
                }
            }
        }
        let expected = order_formula(kind, ring.q, ring.level);
        if expected > budget as u128 {
            return Err(Error::BudgetExceeded {
                required: expected,
                budget,
            });
        }
        let elements = match kind {
            GroupKind::Gl2 => enumerate_gl2(&ring),
            GroupKind::Gu2 => enumerate_gu2(&ring),
        };
        if elements.len() as u128 != expected {
            return Err(Error::OrderMismatch {
                found: elements.len() as u64,
                expected,
            });
        }
        Self::from_elements(ring, kind, elements)
    }

    pub(crate) fn from_elements(
        ring: Ring,
        kind: GroupKind,
        mut elements: Vec<Mat2>,
    ) -> Result<GroupHandle> {
        elements.sort_unstable();
        elements.dedup();
        let order = elements.len() as u64;
        let mut index = HashMap::with_capacity(elements.len());
        for (i, m) in elements.iter().enumerate() {
            index.insert(*m, i as u32);
        }
        let mut inverse = vec![0u32; elements.len()];
        for (i, m) in elements.iter().enumerate() {
            let mi = mat_inv(&ring, m)?;
            inverse[i] = *index
                .get(&mi)
                .ok_or_else(|| Error::Internal("inverse not in element table".into()))?;
        }
        let identity_idx = *index
            .get(&identity(&ring))
            .ok_or_else(|| Error::Internal("identity not in element table".into()))?;
        let mut handle = GroupHandle {
            ring,
            kind,
            order,
            elements,
            index,
            inverse,
            generators: Vec::new(),
            identity_idx,
        };
        handle.generators = handle.find_generators();
        Ok(handle)
    }

    fn find_generators(&self) -> Vec<u32> {
        let mut gens: Vec<u32> = Vec::new();
        let mut closure: HashSet<u32> = HashSet::new();
        closure.insert(self.identity_idx);
        for i in 0..self.elements.len() as u32 {
            if closure.contains(&i) {
                continue;
            }
            gens.push(i);
            closure.clear();
            closure.insert(self.identity_idx);
            let mut queue = vec![self.identity_idx];
            while let Some(x) = queue.pop() {
                for &g in &gens {
                    let y = mat_mul(
                        &self.ring,
                        &self.elements[x as usize],
                        &self.elements[g as usize],
                    );
                    let yi = self.index[&y];
                    if closure.insert(yi) {
                        queue.push(yi);
                    }
                }
            }
            if closure.len() == self.elements.len() {
                break;
            }
        }
        assert_eq!(closure.len(), self.elements.len(), "generators must close");
        gens
    }

    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    pub fn elem(&self, i: u32) -> &Mat2 {
        &self.elements[i as usize]
    }

    pub fn index_of(&self, m: &Mat2) -> Option<u32> {
        self.index.get(m).copied()
    }

    pub fn inverse_of(&self, i: u32) -> u32 {
        self.inverse[i as usize]
    }

    pub fn identity_index(&self) -> u32 {
        self.identity_idx
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    /// `g x g^{-1}` as an element index.
    pub fn conj_idx(&self, g: u32, x: u32) -> u32 {
        let gm = &self.elements[g as usize];
        let gi = &self.elements[self.inverse[g as usize] as usize];
        let y = mat_mul(
            &self.ring,
            &mat_mul(&self.ring, gm, &self.elements[x as usize]),
            gi,
        );
        self.index[&y]
    }

    /// Indices of the congruence subgroup `K^i` (elements `= I mod pi^i`).
    pub fn congruence_subgroup(&self, i: u32) -> Vec<u32> {
        let id = identity(&self.ring);
        (0..self.elements.len() as u32)
            .filter(|&j| {
                let d = mat_sub(&self.ring, &self.elements[j as usize], &id);
                d.e.iter().all(|&c| self.ring.c_val(c) >= i)
            })
            .collect()
    }

    /// Order of the element at index `i`.
    pub fn element_order(&self, i: u32) -> u64 {
        let mut k = 1u64;
        let mut acc = self.elements[i as usize];
        let id = identity(&self.ring);
        while acc != id {
            acc = mat_mul(&self.ring, &acc, &self.elements[i as usize]);
            k += 1;
        }
        k
    }
}

fn enumerate_gl2(ring: &Ring) -> Vec<Mat2> {
    let s = ring.size();
    let mut out = Vec::new();
    for a in 0..s {
        for b in 0..s {
            for c in 0..s {
                for d in 0..s {
                    let dt = ring.c_sub(ring.c_mul(a, d), ring.c_mul(b, c));
                    if ring.c_is_unit(dt) {
                        out.push(Mat2::from_codes(ring, [a, b, c, d]));
                    }
                }
            }
        }
    }
    out
}

/// Column-first scan: first columns `(a, c)` satisfying the Hermitian
/// condition `c° a + a° c = 0` with `a` or `c` a unit, then the second
/// column solved from `A* A = I` (through `d` when `c` is a unit, or
/// through `b` when `c` is not and `a` is).
fn enumerate_gu2(ring: &Ring) -> Vec<Mat2> {
    let n = ring.size();
    let one = ring.c_one();
    let mut out = Vec::new();
    for a in 0..n {
        let a_conj = ring.c_conj(a);
        let a_unit = ring.c_is_unit(a);
        for c in 0..n {
            let c_unit = ring.c_is_unit(c);
            if !a_unit && !c_unit {
                continue;
            }
            let c_conj = ring.c_conj(c);
            // (2,1) entry of A*A
            if ring.c_add(ring.c_mul(c_conj, a), ring.c_mul(a_conj, c)) != 0 {
                continue;
            }
            if c_unit {
                let cinv_conj = ring.c_inv(c_conj).expect("unit");
                for d in 0..n {
                    // (1,1): d° a + b° c = 1  =>  b = (1 - a° d) (c°)^{-1}
                    let b = ring.c_mul(ring.c_sub(one, ring.c_mul(a_conj, d)), cinv_conj);
                    // (1,2): d° b + b° d = 0
                    let d_conj = ring.c_conj(d);
                    let b_conj = ring.c_conj(b);
                    if ring.c_add(ring.c_mul(d_conj, b), ring.c_mul(b_conj, d)) == 0 {
                        out.push(Mat2::from_codes(ring, [a, b, c, d]));
                    }
                }
            } else {
                let ainv_conj = ring.c_inv(a_conj).expect("unit");
                for b in 0..n {
                    // (1,1): d° a + b° c = 1  =>  d = (1 - c° b) (a°)^{-1}
                    let d = ring.c_mul(ring.c_sub(one, ring.c_mul(c_conj, b)), ainv_conj);
                    let d_conj = ring.c_conj(d);
                    let b_conj = ring.c_conj(b);
                    if ring.c_add(ring.c_mul(d_conj, b), ring.c_mul(b_conj, d)) == 0 {
                        out.push(Mat2::from_codes(ring, [a, b, c, d]));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::RingFamily;
    use rand_core::{RngCore, SeedableRng};

    fn ring(p: u64, level: u32, extended: bool) -> Ring {
        Ring::new(RingFamily::Mixed, p, 1, level, extended).unwrap()
    }

    #[test]
    fn star_examples() {
        let e = ring(3, 2, true);
        let id = identity(&e);
        assert_eq!(star(&e, &id).unwrap(), id);
        let w = weyl(&e);
        assert_eq!(mat_mul(&e, &star(&e, &w).unwrap(), &w), id);
        assert!(is_member(&e, GroupKind::Gu2, &w));
        // diag(x, (x^{-1})°) is unitary for every unit x
        for x in e.units() {
            let xinv_c = e.conj(e.inv(x).unwrap()).unwrap();
            let m = Mat2::new(&e, [x, e.zero(), e.zero(), xinv_c]);
            assert_eq!(mat_mul(&e, &star(&e, &m).unwrap(), &m), id);
        }
        let b = ring(3, 2, false);
        assert!(star(&b, &identity(&b)).is_err());
    }

    #[test]
    fn star_is_involutive_antiautomorphism() {
        let e = ring(3, 1, true);
        let mats: Vec<Mat2> = (0..9u64)
            .flat_map(|a| (0..9u64).map(move |b| (a, b)))
            .map(|(a, b)| Mat2::from_codes(&e, [a, b, (a + b) % 9, (a * b + 1) % 9]))
            .collect();
        for x in &mats {
            assert_eq!(star(&e, &star(&e, x).unwrap()).unwrap(), *x);
            for y in mats.iter().step_by(7) {
                assert_eq!(
                    star(&e, &mat_mul(&e, x, y)).unwrap(),
                    mat_mul(&e, &star(&e, y).unwrap(), &star(&e, x).unwrap())
                );
            }
        }
    }

    #[test]
    fn group_orders() {
        let gl31 = GroupHandle::enumerate(ring(3, 1, false), GroupKind::Gl2, 1 << 24).unwrap();
        assert_eq!(gl31.order, 48);
        let gu31 = GroupHandle::enumerate(ring(3, 1, true), GroupKind::Gu2, 1 << 24).unwrap();
        assert_eq!(gu31.order, 96);
        let gl32 = GroupHandle::enumerate(ring(3, 2, false), GroupKind::Gl2, 1 << 24).unwrap();
        assert_eq!(gl32.order, 3888);
        let gu32 = GroupHandle::enumerate(ring(3, 2, true), GroupKind::Gu2, 1 << 24).unwrap();
        assert_eq!(gu32.order, 7776);
        let gl51 = GroupHandle::enumerate(ring(5, 1, false), GroupKind::Gl2, 1 << 24).unwrap();
        assert_eq!(gl51.order, 480);
    }

    #[test]
    fn budget_refusal_names_requirement() {
        match GroupHandle::enumerate(ring(3, 2, true), GroupKind::Gu2, 100) {
            Err(Error::BudgetExceeded { required, budget }) => {
                assert_eq!(required, 7776);
                assert_eq!(budget, 100);
            }
            other => panic!("expected budget refusal, got {other:?}"),
        }
    }

    #[test]
    fn gu2_membership_example() {
        let e = ring(3, 1, true);
        let eps = e.epsilon().unwrap();
        let m = Mat2::new(&e, [e.one(), e.zero(), eps, e.one()]);
        assert!(is_member(&e, GroupKind::Gu2, &m));
    }

    #[test]
    fn closure_spot_check_and_inverses() {
        let h = GroupHandle::enumerate(ring(3, 1, true), GroupKind::Gu2, 1 << 24).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let i = (rng.next_u64() % h.order) as u32;
            let j = (rng.next_u64() % h.order) as u32;
            let p = mat_mul(&h.ring, h.elem(i), h.elem(j));
            assert!(h.index_of(&p).is_some());
        }
        for i in 0..h.order as u32 {
            let prod = mat_mul(&h.ring, h.elem(i), h.elem(h.inverse_of(i)));
            assert_eq!(prod, identity(&h.ring));
        }
    }

    #[test]
    fn det_lands_in_norm_one_subgroup() {
        for level in [1, 2] {
            let e = ring(3, level, true);
            let h = GroupHandle::enumerate(e, GroupKind::Gu2, 1 << 24).unwrap();
            let kernel: std::collections::HashSet<u64> = h
                .ring
                .norm_one_kernel()
                .unwrap()
                .iter()
                .map(|z| z.code())
                .collect();
            for g in h.elements() {
                assert!(kernel.contains(&det(&h.ring, g).code()));
            }
        }
    }

    #[test]
    fn lie_algebra_sizes_and_membership() {
        let b = ring(3, 1, false);
        assert_eq!(lie_algebra(&b, GroupKind::Gl2).len(), 81);
        let e = ring(3, 1, true);
        let gu = lie_algebra(&e, GroupKind::Gu2);
        assert_eq!(gu.len(), 81);
        for x in &gu {
            assert!(is_lie_member(&e, GroupKind::Gu2, x));
        }
        // [[0, eps*s],[eps, 0]] is anti-Hermitian for s in the base ring
        let eps = e.epsilon().unwrap();
        for s in 0..3 {
            let m = Mat2::new(&e, [e.zero(), e.mul(eps, e.from_i64(s)), eps, e.zero()]);
            assert!(is_lie_member(&e, GroupKind::Gu2, &m));
        }
    }

    #[test]
    fn congruence_subgroups() {
        let h = GroupHandle::enumerate(ring(3, 2, true), GroupKind::Gu2, 1 << 24).unwrap();
        let k1 = h.congruence_subgroup(1);
        assert_eq!(k1.len(), 81); // |gu2(o_1)| = q^4
        for &i in k1.iter().step_by(5) {
            for &j in k1.iter().step_by(7) {
                let a = h.elem(i);
                let b = h.elem(j);
                assert_eq!(mat_mul(&h.ring, a, b), mat_mul(&h.ring, b, a));
            }
        }
        let k1set: std::collections::HashSet<u32> = k1.iter().copied().collect();
        for g in (0..h.order as u32).step_by(97) {
            for &k in k1.iter().step_by(11) {
                assert!(k1set.contains(&h.conj_idx(g, k)));
            }
        }

        let gl = GroupHandle::enumerate(ring(3, 2, false), GroupKind::Gl2, 1 << 24).unwrap();
        assert_eq!(gl.congruence_subgroup(1).len(), 81);
        assert_eq!(gl.congruence_subgroup(2).len(), 1);
    }

    #[test]
    fn equal_char_group_order_matches() {
        let r = Ring::new(RingFamily::Equal, 3, 1, 2, false).unwrap();
        let h = GroupHandle::enumerate(r, GroupKind::Gl2, 1 << 24).unwrap();
        assert_eq!(h.order, 3888);
    }
}
