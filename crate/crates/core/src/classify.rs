//! Canonical conjugacy-class labels.
//!
//! For `GL2(o_l)` every matrix is similar to a unique
//! `M(d, i, alpha, beta) = d I + pi^i [[0, alpha],[1, beta]]` and the
//! reduction-to-companion algorithm below computes that label directly.
//! For `GU2(o_l)` the class representatives come in four parametrized
//! families (tags A-D); no closed-form reduction is available, so
//! classification is oracle-backed: the parameter families are
//! enumerated once and matched against the brute-force class partition.
//!
//! The module also carries the adjoint-orbit machinery on the Lie
//! algebras: the type map (`nreg` / `sns` / `ss` / `cus`) on reductions
//! mod `pi`, regularity, and certified orbit representatives.

use crate::census::Partition;
use crate::matgroups::{
    self, det, is_lie_member, is_member, mat_mul, tr, GroupHandle, GroupKind, Mat2,
};
use crate::rings::Ring;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, HashSet};

/// The canonical `GL2` class label `M(d, i, alpha, beta)`: `i` is the
/// depth at which the matrix stops being scalar, `d` the scalar part
/// (digits below `i`), and `alpha`, `beta` are determined modulo
/// `pi^(l-i)`. For `i = l` the matrix is scalar and `alpha`, `beta`
/// are absent (stored as zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Gl2Form {
    pub i: u32,
    pub d: u64,
    pub alpha: u64,
    pub beta: u64,
}

impl Gl2Form {
    /// Realize the label as a matrix at full level.
    pub fn to_matrix(&self, ring: &Ring) -> Mat2 {
        let qi = ring.q.pow(self.i.min(ring.level));
        if self.i >= ring.level {
            return Mat2::from_codes(ring, [self.d, 0, 0, self.d]);
        }
        // entries d I + pi^i [[0, alpha],[1, beta]]; the shifted codes
        // are exact because low digits of the lifted parameters are free
        let a12 = self.alpha * qi;
        let a21 = qi;
        let a22 = ring.c_add(self.d, self.beta * qi);
        Mat2::from_codes(ring, [self.d, a12, a21, a22])
    }

    pub fn label(&self) -> String {
        if self.alpha == 0 && self.beta == 0 && self.i > 0 {
            format!("M(d={},i={},-,-)", self.d, self.i)
        } else {
            format!("M(d={},i={},a={},b={})", self.d, self.i, self.alpha, self.beta)
        }
    }
}

/// Reduce a matrix over `o_l` to its canonical label.
///
/// `i` is the minimum of `val(a12)`, `val(a21)`, `val(a11 - a22)`; the
/// scalar part `d` is read from the digits of `a11` below `i`; the
/// residual `B = pi^{-i}(A - dI)` is non-scalar mod `pi`, hence cyclic,
/// and conjugate to the companion matrix `[[0, -det B],[1, tr B]]`.
pub fn gl2_canonical_form(ring: &Ring, a: &Mat2) -> Gl2Form {
    assert!(!ring.extended, "GL2 labels live over the base ring");
    let l = ring.level;
    let [a11, a12, a21, a22] = a.codes();
    let i = ring
        .c_val(a12)
        .min(ring.c_val(a21))
        .min(ring.c_val(ring.c_sub(a11, a22)))
        .min(l);
    let qi = ring.q.pow(i);
    let d = a11 % qi;
    if i == l {
        return Gl2Form {
            i,
            d: a11,
            alpha: 0,
            beta: 0,
        };
    }
    let sub = ring.truncated(l - i).expect("positive level");
    let shift = |x: u64| -> u64 {
        debug_assert!(ring.c_val(x) >= i);
        x / qi
    };
    let b = Mat2::from_codes(
        &sub,
        [
            shift(ring.c_sub(a11, d)),
            shift(a12),
            shift(a21),
            shift(ring.c_sub(a22, d)),
        ],
    );
    let [b11, b12, b21, b22] = b.codes();
    // B is non-scalar mod pi, so one of e1, e2, e1+e2 generates a basis
    // together with its image.
    let cyclic = sub.c_is_unit(b21)
        || sub.c_is_unit(b12)
        || sub.c_is_unit(sub.c_sub(sub.c_add(b21, b22), sub.c_add(b11, b12)));
    assert!(cyclic, "non-scalar reduction must be cyclic");
    Gl2Form {
        i,
        d,
        alpha: sub.c_neg(det(&sub, &b).code()),
        beta: tr(&sub, &b).code(),
    }
}

/// Number of canonical labels that are invertible, counted symbolically
/// over the parameter ranges (no group scan).
pub fn gl2_form_count(q: u64, level: u32) -> u128 {
    let q = q as u128;
    let mut total = (q - 1) * crate::pow_u128(q, 2 * level - 1); // i = 0
    for i in 1..level {
        total += (q - 1) * crate::pow_u128(q, i - 1) * crate::pow_u128(q, 2 * (level - i));
    }
    total + (q - 1) * crate::pow_u128(q, level - 1) // i = level (scalars)
}

/// Orbit type of the reduction mod `pi`: non-regular, split
/// non-semisimple, semisimple, or cuspidal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OrbitType {
    Nreg,
    Sns,
    Ss,
    Cus,
}

impl OrbitType {
    pub fn as_str(&self) -> &'static str {
        match self {
            OrbitType::Nreg => "nreg",
            OrbitType::Sns => "sns",
            OrbitType::Ss => "ss",
            OrbitType::Cus => "cus",
        }
    }
}

/// A matrix is regular when its reduction mod `pi` is non-scalar
/// (equivalently, for 2x2: the characteristic polynomial of the
/// reduction equals its minimal polynomial).
pub fn is_regular(ring: &Ring, x: &Mat2) -> bool {
    let [a, b, c, d] = x.codes();
    !(ring.c_val(b) >= 1 && ring.c_val(c) >= 1 && ring.c_val(ring.c_sub(a, d)) >= 1)
}

/// Type map on Lie-algebra elements, computed from the reduction mod
/// `pi`: scalar is `nreg`; otherwise the discriminant
/// `tr^2 - 4 det` lies in the base ring (for anti-Hermitian matrices
/// its `eps` part vanishes) and its residue decides the split:
/// zero is `sns`, a nonzero square is `ss`, a nonsquare is `cus`.
pub fn orbit_type(ring: &Ring, x: &Mat2) -> OrbitType {
    if !is_regular(ring, x) {
        return OrbitType::Nreg;
    }
    let lvl1 = ring.truncated(1).expect("level 1");
    let red = project_mat(ring, &lvl1, x);
    let t = tr(&lvl1, &red).code();
    let d = det(&lvl1, &red).code();
    let disc = lvl1.c_sub(lvl1.c_mul(t, t), lvl1.c_mul(lvl1.c_from_i64(4), d));
    let disc_base = if lvl1.extended {
        let (hi, lo) = lvl1.split(disc);
        assert_eq!(lo, 0, "discriminant of an anti-Hermitian matrix is real");
        hi
    } else {
        disc
    };
    if disc_base == 0 {
        OrbitType::Sns
    } else {
        let base1 = Ring::new(ring.family, ring.p, ring.f, 1, false).expect("base level 1");
        if base1.is_square(base1.elem(disc_base)) {
            OrbitType::Ss
        } else {
            OrbitType::Cus
        }
    }
}

pub fn project_mat(ring: &Ring, target: &Ring, x: &Mat2) -> Mat2 {
    let codes = x.codes();
    Mat2::from_codes(
        target,
        [
            ring.c_project(target, codes[0]),
            ring.c_project(target, codes[1]),
            ring.c_project(target, codes[2]),
            ring.c_project(target, codes[3]),
        ],
    )
}

pub fn lift_mat(ring: &Ring, target: &Ring, x: &Mat2) -> Mat2 {
    let codes = x.codes();
    Mat2::from_codes(
        target,
        [
            ring.c_lift(target, codes[0]),
            ring.c_lift(target, codes[1]),
            ring.c_lift(target, codes[2]),
            ring.c_lift(target, codes[3]),
        ],
    )
}

/// Adjoint orbit of a Lie element under conjugation by the group.
pub fn ad_orbit(h: &GroupHandle, x: &Mat2) -> HashSet<Mat2> {
    let ring = &h.ring;
    let mut seen = HashSet::new();
    seen.insert(*x);
    let mut stack = vec![*x];
    while let Some(y) = stack.pop() {
        for &g in h.generators() {
            let gm = h.elem(g);
            let gi = h.elem(h.inverse_of(g));
            let z = mat_mul(ring, &mat_mul(ring, gm, &y), gi);
            if seen.insert(z) {
                stack.push(z);
            }
        }
    }
    seen
}

/// Shape-family representatives for the regular orbit types, in
/// canonical parameter order. `epsilon` is `1` for `gl2` and `eps` for
/// `gu2`; the scalar part runs over the base ring for `gl2` and over
/// `eps * base` for `gu2`.
pub fn shape_family(ring: &Ring, kind: GroupKind, ty: OrbitType) -> Vec<Mat2> {
    let eps_like: Vec<u64> = match kind {
        GroupKind::Gl2 => vec![ring.c_one()],
        GroupKind::Gu2 => vec![ring.epsilon().expect("extension").code()],
    };
    let eps = eps_like[0];
    let base = ring
        .base_ring()
        .unwrap_or_else(|_| ring.clone());
    let base_codes: Vec<u64> = (0..base.size()).collect();
    let embed = |c: u64| -> u64 {
        if ring.extended {
            c * ring.base_size()
        } else {
            c
        }
    };
    let xs: Vec<u64> = match kind {
        GroupKind::Gl2 => base_codes.clone(),
        GroupKind::Gu2 => base_codes.iter().map(|&s| ring.c_mul(eps, embed(s))).collect(),
    };
    let eps_sq = embed(ring.eps_sq_base_code());
    let mut out = Vec::new();
    match ty {
        OrbitType::Nreg => {}
        OrbitType::Ss => {
            // diag(x - r e^2, x + r e^2), r a base unit
            for &x in &xs {
                for &r in &base_codes {
                    if !base.c_is_unit(r) {
                        continue;
                    }
                    let re2 = ring.c_mul(embed(r), if kind == GroupKind::Gl2 { ring.c_one() } else { eps_sq });
                    let m = Mat2::from_codes(
                        ring,
                        [ring.c_sub(x, re2), 0, 0, ring.c_add(x, re2)],
                    );
                    if is_lie_member(ring, kind, &m) {
                        out.push(m);
                    }
                }
            }
        }
        OrbitType::Sns => {
            // [[x, e pi b],[e, x]]
            let pi = ring.c_pi();
            for &x in &xs {
                for &b in &base_codes {
                    let top = ring.c_mul(eps, ring.c_mul(pi, embed(b)));
                    let m = Mat2::from_codes(ring, [x, top, eps, x]);
                    if is_lie_member(ring, kind, &m) {
                        out.push(m);
                    }
                }
            }
        }
        OrbitType::Cus => {
            // [[x, e s],[e, x]], s a square unit for gu2 and a
            // nonsquare unit for gl2
            for &x in &xs {
                for &s in &base_codes {
                    if !base.c_is_unit(s) {
                        continue;
                    }
                    let want_square = kind == GroupKind::Gu2;
                    if base.is_square(base.elem(s)) != want_square {
                        continue;
                    }
                    let m = Mat2::from_codes(ring, [x, ring.c_mul(eps, embed(s)), eps, x]);
                    if is_lie_member(ring, kind, &m) {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

/// Certified adjoint-orbit representative and type: for regular
/// elements the first shape-family member lying in the orbit of `x`
/// (orbit membership checked exhaustively), for non-regular elements
/// the least orbit member (already of shape `xI + pi C`).
pub fn adjoint_rep_and_type(h: &GroupHandle, x: &Mat2) -> Result<(Mat2, OrbitType)> {
    let ring = &h.ring;
    if !is_lie_member(ring, h.kind, x) {
        return Err(Error::Classification(
            "not a Lie algebra element of this kind".into(),
        ));
    }
    let ty = orbit_type(ring, x);
    let orbit = ad_orbit(h, x);
    if ty == OrbitType::Nreg {
        let rep = orbit.iter().min().copied().expect("orbit nonempty");
        return Ok((rep, ty));
    }
    for cand in shape_family(ring, h.kind, ty) {
        if orbit.contains(&cand) {
            return Ok((cand, ty));
        }
    }
    Err(Error::Classification(format!(
        "no shape-family representative found for a {} orbit",
        ty.as_str()
    )))
}

/// Classification tag of a `GU2` conjugacy class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Gu2Tag {
    A,
    B,
    C,
    D,
}

impl Gu2Tag {
    pub fn as_str(&self) -> &'static str {
        match self {
            Gu2Tag::A => "A",
            Gu2Tag::B => "B",
            Gu2Tag::C => "C",
            Gu2Tag::D => "D",
        }
    }
}

/// A matched class representative with its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gu2Rep {
    pub tag: Gu2Tag,
    /// Raw parameter codes: A: `[x]`; B: `[x]`; C: `[x, y]`;
    /// D: `[i, beta, x, y]`.
    pub params: Vec<u64>,
    pub matrix: Mat2,
}

impl Gu2Rep {
    pub fn label(&self) -> String {
        let p: Vec<String> = self.params.iter().map(|x| x.to_string()).collect();
        format!("{}({})", self.tag.as_str(), p.join(","))
    }
}

/// The classified conjugacy classes of an enumerated `GU2` handle.
pub struct Gu2Classification {
    pub reps: Vec<Gu2Rep>,
    pub tags: Vec<Gu2Tag>,
}

impl Gu2Classification {
    /// Enumerate all four representative families, verify that every
    /// family member really is unitary, and match classes. Errors when
    /// a class is matched by two different tags or by none: either
    /// event falsifies the classification being checked.
    pub fn build(h: &GroupHandle, part: &Partition) -> Result<Gu2Classification> {
        assert_eq!(h.kind, GroupKind::Gu2);
        let ring = &h.ring;
        let k = part.reps.len();
        let mut rep_of: Vec<Option<Gu2Rep>> = vec![None; k];
        let mut tag_of: Vec<Option<Gu2Tag>> = vec![None; k];

        let offer = |cand: Gu2Rep, rep_of: &mut Vec<Option<Gu2Rep>>, tag_of: &mut Vec<Option<Gu2Tag>>| -> Result<()> {
            let idx = h.index_of(&cand.matrix).ok_or_else(|| {
                Error::Classification(format!(
                    "family member {:?} is not in the group",
                    cand.matrix
                ))
            })?;
            let c = part.class_of[idx as usize] as usize;
            match tag_of[c] {
                None => {
                    tag_of[c] = Some(cand.tag);
                    rep_of[c] = Some(cand);
                }
                Some(t) if t == cand.tag => {}
                Some(t) => {
                    return Err(Error::Classification(format!(
                        "class {} matched by two tags: {} and {}",
                        c,
                        t.as_str(),
                        cand.tag.as_str()
                    )))
                }
            }
            Ok(())
        };

        for cand in gu2_families(ring) {
            offer(cand, &mut rep_of, &mut tag_of)?;
        }

        let mut reps = Vec::with_capacity(k);
        let mut tags = Vec::with_capacity(k);
        for c in 0..k {
            match (rep_of[c].take(), tag_of[c]) {
                (Some(r), Some(t)) => {
                    reps.push(r);
                    tags.push(t);
                }
                _ => {
                    return Err(Error::Classification(format!(
                        "class {} (representative {:?}) matched no family",
                        c,
                        h.elem(part.reps[c])
                    )))
                }
            }
        }
        Ok(Gu2Classification { reps, tags })
    }

    pub fn classify(&self, h: &GroupHandle, part: &Partition, g: &Mat2) -> Result<&Gu2Rep> {
        let idx = h
            .index_of(g)
            .ok_or_else(|| Error::Classification("element not in the group".into()))?;
        Ok(&self.reps[part.class_of[idx as usize] as usize])
    }
}

/// All family candidates, tag A then B then C then D, parameters in
/// canonical code order.
fn gu2_families(ring: &Ring) -> Vec<Gu2Rep> {
    let n = ring.size();
    let one = ring.c_one();
    let mut out = Vec::new();
    // A: scalars x I with x x° = 1
    for x in 0..n {
        if ring.c_norm(x) == 1 {
            out.push(Gu2Rep {
                tag: Gu2Tag::A,
                params: vec![x],
                matrix: Mat2::from_codes(ring, [x, 0, 0, x]),
            });
        }
    }
    // B: diag(x, (x^{-1})°) with x x° != 1
    for x in 0..n {
        if !ring.c_is_unit(x) || ring.c_norm(x) == 1 {
            continue;
        }
        let d = ring.c_conj(ring.c_inv(x).expect("unit"));
        out.push(Gu2Rep {
            tag: Gu2Tag::B,
            params: vec![x],
            matrix: Mat2::from_codes(ring, [x, 0, 0, d]),
        });
    }
    // C: [[x, y],[y, x]], y != 0, x x° + y y° = 1, x y° + x° y = 0
    for x in 0..n {
        for y in 1..n {
            let c1 = ring.c_add(ring.c_norm(x), ring.c_norm(y)) == 1;
            let c2 = ring.c_add(
                ring.c_mul(x, ring.c_conj(y)),
                ring.c_mul(ring.c_conj(x), y),
            ) == 0;
            if c1 && c2 {
                out.push(Gu2Rep {
                    tag: Gu2Tag::C,
                    params: vec![x, y],
                    matrix: Mat2::from_codes(ring, [x, y, y, x]),
                });
            }
        }
    }
    // D: [[x, pi^{i+1} b y],[pi^i y, x]], x, y units,
    //    x x° + pi^{2i+1} b y y° = 1, pi^i (x y° + x° y) = 0
    let l = ring.level;
    for i in 0..l {
        let pi_i = pow_code(ring, ring.c_pi(), i);
        let pi_2i1 = pow_code(ring, ring.c_pi(), 2 * i + 1);
        let beta_range = if l - i - 1 == 0 {
            1
        } else {
            ring.q.pow(l - i - 1)
        };
        for beta in 0..beta_range {
            let beta_emb = beta * ring.base_size(); // base code embedded
            for x in 0..n {
                if !ring.c_is_unit(x) {
                    continue;
                }
                for y in 0..n {
                    if !ring.c_is_unit(y) {
                        continue;
                    }
                    let yy = ring.c_norm(y) * ring.base_size(); // embed norm
                    let c1 = ring.c_add(
                        ring.c_norm(x) * ring.base_size(),
                        ring.c_mul(pi_2i1, ring.c_mul(beta_emb, yy)),
                    ) == one;
                    if !c1 {
                        continue;
                    }
                    let herm = ring.c_mul(
                        pi_i,
                        ring.c_add(
                            ring.c_mul(x, ring.c_conj(y)),
                            ring.c_mul(ring.c_conj(x), y),
                        ),
                    );
                    if herm != 0 {
                        continue;
                    }
                    let a12 = ring.c_mul(pow_code(ring, ring.c_pi(), i + 1), ring.c_mul(beta_emb, y));
                    let a21 = ring.c_mul(pi_i, y);
                    out.push(Gu2Rep {
                        tag: Gu2Tag::D,
                        params: vec![i as u64, beta, x, y],
                        matrix: Mat2::from_codes(ring, [x, a12, a21, x]),
                    });
                }
            }
        }
    }
    out
}

pub(crate) fn pow_code(ring: &Ring, base: u64, k: u32) -> u64 {
    let mut acc = ring.c_one();
    for _ in 0..k {
        acc = ring.c_mul(acc, base);
    }
    acc
}

/// Class-id sets for the five families of real classes (the rows of
/// the real-class table): `+-I`; real diagonal `diag(x, x^{-1})` with
/// `x^2 != 1`; the Weyl class; the norm-one antidiagonal family
/// `[[a, b eps],[b eps, a]]` with `N(a + b eps) = 1`, `b != 0`; and the
/// real unipotent-like family of tag D.
pub fn table1_row_class_sets(
    h: &GroupHandle,
    part: &Partition,
) -> Result<[BTreeSet<u32>; 5]> {
    assert_eq!(h.kind, GroupKind::Gu2);
    let ring = &h.ring;
    let s = ring.base_size();
    let class_of_mat = |m: &Mat2| -> Result<u32> {
        let idx = h
            .index_of(m)
            .ok_or_else(|| Error::Classification(format!("row family member {m:?} not in group")))?;
        Ok(part.class_of[idx as usize])
    };
    let mut rows: [BTreeSet<u32>; 5] = Default::default();
    // row 1: x I, x = +-1
    for v in [1i64, -1] {
        let x = ring.c_from_i64(v);
        rows[0].insert(class_of_mat(&Mat2::from_codes(ring, [x, 0, 0, x]))?);
    }
    // row 2: diag(x, x^{-1}) with x in the base units, x^2 != 1
    for xb in 0..s {
        let x = xb * s;
        if !ring.c_is_unit(x) || ring.c_mul(x, x) == ring.c_one() {
            continue;
        }
        let m = Mat2::from_codes(ring, [x, 0, 0, ring.c_inv(x).expect("unit")]);
        rows[1].insert(class_of_mat(&m)?);
    }
    // row 3: the Weyl class
    rows[2].insert(class_of_mat(&matgroups::weyl(ring))?);
    // row 4: [[a, b eps],[b eps, a]], a, b base, b != 0, a^2 - b^2 eps^2 = 1
    let eps = ring.epsilon().expect("extension").code();
    for ab in 0..s {
        let a = ab * s;
        for bb in 1..s {
            let be = ring.c_mul(eps, bb * s);
            let m = Mat2::from_codes(ring, [a, be, be, a]);
            if det(ring, &m).code() == ring.c_one() && is_member(ring, GroupKind::Gu2, &m) {
                rows[3].insert(class_of_mat(&m)?);
            }
        }
    }
    // row 5: real members of the tag-D family: x in the base units and
    // both displayed unit equations hold
    let l = ring.level;
    for i in 0..l {
        let pi_i = pow_code(ring, ring.c_pi(), i);
        let pi_i1 = pow_code(ring, ring.c_pi(), i + 1);
        let pi_2i1 = pow_code(ring, ring.c_pi(), 2 * i + 1);
        let beta_range = if l - i - 1 == 0 { 1 } else { ring.q.pow(l - i - 1) };
        for beta in 0..beta_range {
            let beta_emb = beta * s;
            for xb in 0..s {
                let x = xb * s;
                if !ring.c_is_unit(x) {
                    continue;
                }
                let x2 = ring.c_mul(x, x);
                for y in 0..ring.size() {
                    if !ring.c_is_unit(y) {
                        continue;
                    }
                    let nyy = ring.c_norm(y) * s;
                    let lhs1 = ring.c_add(x2, ring.c_mul(pi_2i1, ring.c_mul(beta_emb, nyy)));
                    let y2 = ring.c_mul(y, y);
                    let lhs2 = ring.c_sub(x2, ring.c_mul(pi_2i1, ring.c_mul(beta_emb, y2)));
                    if lhs1 != ring.c_one() || lhs2 != ring.c_one() {
                        continue;
                    }
                    let herm = ring.c_mul(
                        pi_i,
                        ring.c_add(
                            ring.c_mul(x, ring.c_conj(y)),
                            ring.c_mul(ring.c_conj(x), y),
                        ),
                    );
                    if herm != 0 {
                        continue;
                    }
                    let m = Mat2::from_codes(
                        ring,
                        [x, ring.c_mul(pi_i1, ring.c_mul(beta_emb, y)), ring.c_mul(pi_i, y), x],
                    );
                    if is_member(ring, GroupKind::Gu2, &m) {
                        rows[4].insert(class_of_mat(&m)?);
                    }
                }
            }
        }
    }
    Ok(rows)
}

/// Reporting-only class type for group elements: scalar reductions are
/// `nreg`, vanishing reduced discriminant is `sns`; otherwise for `GL2`
/// the residue discriminant decides `ss` vs `cus`, and for `GU2` an
/// eigenvalue of the reduction has norm one exactly for the compact
/// (Weyl-type) classes, reported as `cus`.
pub fn group_class_type(ring: &Ring, kind: GroupKind, g: &Mat2) -> OrbitType {
    if !is_regular(ring, g) {
        return OrbitType::Nreg;
    }
    let lvl1 = ring.truncated(1).expect("level 1");
    let red = project_mat(ring, &lvl1, g);
    let t = tr(&lvl1, &red).code();
    let d = det(&lvl1, &red).code();
    let disc = lvl1.c_sub(lvl1.c_mul(t, t), lvl1.c_mul(lvl1.c_from_i64(4), d));
    if disc == 0 {
        return OrbitType::Sns;
    }
    match kind {
        GroupKind::Gl2 => {
            if lvl1.is_square(lvl1.elem(disc)) {
                OrbitType::Ss
            } else {
                OrbitType::Cus
            }
        }
        GroupKind::Gu2 => match lvl1.sqrt(lvl1.elem(disc)) {
            Some(sq) => {
                // eigenvalue (t + sq(disc)) / 2
                let half = lvl1.c_inv(lvl1.c_from_i64(2)).expect("2 a unit");
                let lam = lvl1.c_mul(lvl1.c_add(t, sq.code()), half);
                if lvl1.c_norm(lam) == 1 {
                    OrbitType::Cus
                } else {
                    OrbitType::Ss
                }
            }
            None => OrbitType::Cus,
        },
    }
}

/// Scalar matrices of the group (its center).
pub fn center(h: &GroupHandle) -> Vec<u32> {
    let ring = &h.ring;
    let mut out = Vec::new();
    for x in 0..ring.size() {
        let m = Mat2::from_codes(ring, [x, 0, 0, x]);
        if let Some(i) = h.index_of(&m) {
            out.push(i);
        }
    }
    out.sort_unstable();
    out
}

/// Centralizer order of a regular Lie element via the closed
/// parametrization `{x I + y A} ∩ G`, plus the index `[Z : Z_A]` where
/// `Z_A` is cut out by the determinant image of the centralizer of the
/// reduction of `A` at level `floor(l/2)`.
pub fn centralizer_and_za(
    h: &GroupHandle,
    h_half: &GroupHandle,
    a: &Mat2,
) -> Result<(u64, u64)> {
    let ring = &h.ring;
    if !is_regular(ring, a) {
        return Err(Error::Classification(
            "centralizer parametrization requires a regular element".into(),
        ));
    }
    let n = ring.size();
    let mut cent = 0u64;
    for x in 0..n {
        for y in 0..n {
            let m = mat_add_scaled(ring, x, y, a);
            if is_member(ring, h.kind, &m) {
                cent += 1;
            }
        }
    }
    // Z_A: scalars of G whose half-level reduction lies in
    // det(C_{G(l/2)}(A-bar))
    let half = h_half.ring.clone();
    let a_half = project_mat(ring, &half, a);
    let mut dets: HashSet<u64> = HashSet::new();
    for g in h_half.elements() {
        if mat_mul(&half, g, &a_half) == mat_mul(&half, &a_half, g) {
            dets.insert(det(&half, g).code());
        }
    }
    let z = center(h);
    let mut za = 0u64;
    for &zi in &z {
        let x = h.elem(zi).codes()[0];
        if dets.contains(&ring.c_project(&half, x)) {
            za += 1;
        }
    }
    if za == 0 || z.len() as u64 % za != 0 {
        return Err(Error::Internal("Z_A does not divide the center".into()));
    }
    Ok((cent, z.len() as u64 / za))
}

fn mat_add_scaled(ring: &Ring, x: u64, y: u64, a: &Mat2) -> Mat2 {
    let [a11, a12, a21, a22] = a.codes();
    Mat2::from_codes(
        ring,
        [
            ring.c_add(x, ring.c_mul(y, a11)),
            ring.c_mul(y, a12),
            ring.c_mul(y, a21),
            ring.c_add(x, ring.c_mul(y, a22)),
        ],
    )
}

/// Brute-force centralizer order (independent oracle for the closed
/// parametrization).
pub fn centralizer_order_scan(h: &GroupHandle, a: &Mat2) -> u64 {
    let ring = &h.ring;
    h.elements()
        .iter()
        .filter(|g| mat_mul(ring, g, a) == mat_mul(ring, a, g))
        .count() as u64
}

/// Map every element of the group to its canonical `GL2` label and
/// verify the label is a class invariant separating classes; returns
/// the label of each class.
pub fn gl2_labels_cross_checked(
    h: &GroupHandle,
    part: &Partition,
) -> Result<Vec<Gl2Form>> {
    assert_eq!(h.kind, GroupKind::Gl2);
    let ring = &h.ring;
    let k = part.reps.len();
    let mut label_of_class: Vec<Option<Gl2Form>> = vec![None; k];
    let mut seen: HashMap<Gl2Form, u32> = HashMap::new();
    for (idx, g) in h.elements().iter().enumerate() {
        let c = part.class_of[idx] as usize;
        let f = gl2_canonical_form(ring, g);
        match label_of_class[c] {
            None => {
                if let Some(&other) = seen.get(&f) {
                    if other != c as u32 {
                        return Err(Error::Falsified(format!(
                            "label {} shared by classes {} and {}",
                            f.label(),
                            other,
                            c
                        )));
                    }
                }
                seen.insert(f, c as u32);
                label_of_class[c] = Some(f);
            }
            Some(prev) if prev == f => {}
            Some(prev) => {
                return Err(Error::Falsified(format!(
                    "class {} carries two labels {} and {}",
                    c,
                    prev.label(),
                    f.label()
                )))
            }
        }
    }
    Ok(label_of_class.into_iter().map(|o| o.unwrap()).collect())
}
