//! Real and strongly real elements: exhaustive oracles, closed-form
//! criteria, and the involution census.
//!
//! An element is real when it is conjugate to its inverse, and strongly
//! real when the conjugator can be chosen to be an involution (the
//! identity counts, so `g^2 = 1` makes `g` strongly real). Both
//! notions are class functions; with a class partition in hand the
//! reality oracle is a single table lookup and witnesses are recovered
//! by canonical-order scans.

use crate::census::Partition;
use crate::classify::Gu2Classification;
use crate::matgroups::{identity, mat_inv, mat_mul, tr, GroupHandle, GroupKind, Mat2};
use crate::Result;
use serde::{Deserialize, Serialize};

/// Verdict for one element, with witnesses when the searches are run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RealityVerdict {
    pub is_real: bool,
    pub is_strongly_real: bool,
    pub criterion_real: bool,
    pub criterion_strongly_real: Option<bool>,
    pub witness_conjugator: Option<Mat2>,
    pub witness_involution: Option<Mat2>,
}

/// Closed-form reality criterion, pure matrix computation (usable
/// without an enumerated handle, e.g. above the enumeration budget):
/// `det(g)` is `+-1` and `tr(g) = tr(g^{-1})`.
pub fn criterion_real(ring: &crate::rings::Ring, g: &Mat2) -> crate::Result<bool> {
    let d = crate::matgroups::det(ring, g);
    if d != ring.one() && d != ring.from_i64(-1) {
        return Ok(false);
    }
    let gi = mat_inv(ring, g)?;
    Ok(tr(ring, g) == tr(ring, &gi))
}

/// Indices of all `g` with `g^2 = 1`, identity included, in canonical
/// order.
pub fn involutions(h: &GroupHandle) -> Vec<u32> {
    let ring = &h.ring;
    let id = identity(ring);
    (0..h.order as u32)
        .filter(|&i| {
            let g = h.elem(i);
            mat_mul(ring, g, g) == id
        })
        .collect()
}

/// `(q - dG) q^(2l-1) + 2` with `dG = -1` for `GL2` and `+1` for `GU2`.
pub fn involution_count_formula(kind: GroupKind, q: u64, level: u32) -> u128 {
    let q = q as u128;
    let d = kind.partial_sign();
    let head = crate::pow_u128(q, 2 * level - 1);
    ((q as i128 - d as i128) as u128) * head + 2
}

/// Reality oracle over an enumerated group with its class partition.
pub struct RealityOracle<'a> {
    pub handle: &'a GroupHandle,
    pub partition: &'a Partition,
    pub inverse_class: Vec<u32>,
    pub involutions: Vec<u32>,
}

impl<'a> RealityOracle<'a> {
    pub fn new(handle: &'a GroupHandle, partition: &'a Partition) -> RealityOracle<'a> {
        let inverse_class = partition.inverse_class_map(handle);
        RealityOracle {
            handle,
            partition,
            inverse_class,
            involutions: involutions(handle),
        }
    }

    pub fn is_real_class(&self, class: u32) -> bool {
        self.inverse_class[class as usize] == class
    }

    /// Real iff the class contains the inverse; the witness is the
    /// first `h` in canonical order with `h g h^{-1} = g^{-1}`.
    pub fn is_real(&self, g: &Mat2) -> (bool, Option<Mat2>) {
        let h = self.handle;
        let ring = &h.ring;
        let idx = h.index_of(g).expect("element of the group");
        let real = self.is_real_class(self.partition.class_of[idx as usize]);
        if !real {
            return (false, None);
        }
        let ginv = h.elem(h.inverse_of(idx)).to_owned();
        for cand in h.elements() {
            let ci = mat_inv(ring, cand).expect("group element");
            if mat_mul(ring, &mat_mul(ring, cand, g), &ci) == ginv {
                return (true, Some(*cand));
            }
        }
        unreachable!("real element must have a conjugating witness");
    }

    /// Strongly real iff some involution conjugates `g` to `g^{-1}`;
    /// the witness is the first such involution in canonical order.
    pub fn is_strongly_real(&self, g: &Mat2) -> (bool, Option<Mat2>) {
        let h = self.handle;
        let ring = &h.ring;
        let idx = h.index_of(g).expect("element of the group");
        let ginv = h.elem(h.inverse_of(idx)).to_owned();
        for &t in &self.involutions {
            let tau = h.elem(t);
            if mat_mul(ring, &mat_mul(ring, tau, g), tau) == ginv {
                return (true, Some(*tau));
            }
        }
        (false, None)
    }

    /// Closed-form criteria. Reality: `det(g)` is `+-1` and
    /// `tr(g) = tr(g^{-1})`. Strong reality is closed-form for `GU2`
    /// only through the classification (real classes outside tag D);
    /// for `GL2` real and strongly real coincide.
    pub fn criteria(&self, g: &Mat2, gu2: Option<&Gu2Classification>) -> (bool, Option<bool>) {
        let h = self.handle;
        let ring = &h.ring;
        let criterion_real =
            criterion_real(ring, g).expect("group elements are invertible");
        let strongly = match h.kind {
            GroupKind::Gl2 => Some(criterion_real),
            GroupKind::Gu2 => gu2.map(|cls| {
                criterion_real && {
                    let idx = h.index_of(g).expect("element of the group");
                    let c = self.partition.class_of[idx as usize] as usize;
                    cls.tags[c] != crate::classify::Gu2Tag::D
                }
            }),
        };
        (criterion_real, strongly)
    }

    pub fn verdict(&self, g: &Mat2, gu2: Option<&Gu2Classification>) -> RealityVerdict {
        let (is_real, witness_conjugator) = self.is_real(g);
        let (is_strongly_real, witness_involution) = self.is_strongly_real(g);
        let (criterion_real, criterion_strongly_real) = self.criteria(g, gu2);
        RealityVerdict {
            is_real,
            is_strongly_real,
            criterion_real,
            criterion_strongly_real,
            witness_conjugator,
            witness_involution,
        }
    }
}

/// Involution census: the brute count against the closed formula.
pub fn involution_census(h: &GroupHandle) -> Result<(u64, Vec<u32>)> {
    let list = involutions(h);
    Ok((list.len() as u64, list))
}

/// JSON row for one verdict: element digit data, reality flags,
/// criterion flags, and witnesses (as digit data) when present.
pub fn verdict_to_json(
    ring: &crate::rings::Ring,
    g: &Mat2,
    v: &RealityVerdict,
) -> serde_json::Value {
    let digits = |m: &Mat2| -> Vec<Vec<Vec<u64>>> {
        m.entries(ring).iter().map(|e| ring.digits(*e)).collect()
    };
    serde_json::json!({
        "element": digits(g),
        "isReal": v.is_real,
        "isStronglyReal": v.is_strongly_real,
        "criterionReal": v.criterion_real,
        "criterionStronglyReal": v.criterion_strongly_real,
        "witnessConjugator": v.witness_conjugator.as_ref().map(&digits),
        "witnessInvolution": v.witness_involution.as_ref().map(&digits),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::conjugacy_partition;
    use crate::matgroups::{weyl, GroupHandle};
    use crate::rings::{Ring, RingFamily};

    fn handle(p: u64, level: u32, kind: GroupKind) -> GroupHandle {
        let ring = Ring::new(RingFamily::Mixed, p, 1, level, kind == GroupKind::Gu2).unwrap();
        GroupHandle::enumerate(ring, kind, 1 << 24).unwrap()
    }

    #[test]
    fn involution_counts_match_formula() {
        for (kind, p, level, expected) in [
            (GroupKind::Gl2, 3, 1, 14u64),
            (GroupKind::Gl2, 3, 2, 110),
            (GroupKind::Gu2, 3, 1, 8),
            (GroupKind::Gu2, 3, 2, 56),
        ] {
            let h = handle(p, level, kind);
            let (count, _) = involution_census(&h).unwrap();
            assert_eq!(count, expected);
            assert_eq!(involution_count_formula(kind, 3, level), expected as u128);
        }
    }

    #[test]
    fn weyl_is_real_with_valid_witness() {
        let h = handle(3, 1, GroupKind::Gl2);
        let part = conjugacy_partition(&h);
        let oracle = RealityOracle::new(&h, &part);
        let w = weyl(&h.ring);
        let (real, wit) = oracle.is_real(&w);
        assert!(real);
        let wit = wit.unwrap();
        let wi = mat_inv(&h.ring, &wit).unwrap();
        assert_eq!(
            mat_mul(&h.ring, &mat_mul(&h.ring, &wit, &w), &wi),
            mat_inv(&h.ring, &w).unwrap()
        );
        let (srreal, tau) = oracle.is_strongly_real(&w);
        assert!(srreal);
        let tau = tau.unwrap();
        assert_eq!(mat_mul(&h.ring, &tau, &tau), identity(&h.ring));
    }

    #[test]
    fn triangular_involution_inverts_m_family() {
        // [[1, b],[0, -1]] squares to the identity and conjugates
        // d I + pi^i [[0, a],[1, b]] to its inverse when d = +-1 and
        // b = +-pi^i a (the non-regular real family).
        let r = Ring::new(RingFamily::Mixed, 3, 1, 2, false).unwrap();
        for i in 1..=2u32 {
            let pi_i = 3u64.pow(i) % 9;
            for alpha in 0..9u64 {
                for dsign in [1i64, -1] {
                    let d = r.c_from_i64(dsign);
                    let b = if dsign == 1 {
                        r.c_mul(pi_i, alpha)
                    } else {
                        r.c_neg(r.c_mul(pi_i, alpha))
                    };
                    let m = Mat2::from_codes(
                        &r,
                        [
                            d,
                            r.c_mul(pi_i, alpha),
                            pi_i,
                            r.c_add(d, r.c_mul(pi_i, b)),
                        ],
                    );
                    assert!(crate::matgroups::is_member(&r, GroupKind::Gl2, &m));
                    let tau = Mat2::from_codes(&r, [1, b, 0, r.c_from_i64(-1)]);
                    assert_eq!(mat_mul(&r, &tau, &tau), identity(&r));
                    let ti = mat_inv(&r, &tau).unwrap();
                    let lhs = mat_mul(&r, &mat_mul(&r, &tau, &m), &ti);
                    assert_eq!(lhs, mat_inv(&r, &m).unwrap());
                }
            }
        }
    }

    #[test]
    fn gu2_unipotent_real_but_not_strongly_real() {
        let h = handle(3, 1, GroupKind::Gu2);
        let part = conjugacy_partition(&h);
        let oracle = RealityOracle::new(&h, &part);
        assert_eq!(oracle.involutions.len(), 8);
        let e = &h.ring;
        let eps = e.epsilon().unwrap();
        let u = Mat2::new(e, [e.one(), e.zero(), eps, e.one()]);
        let (real, _) = oracle.is_real(&u);
        let (strong, _) = oracle.is_strongly_real(&u);
        assert!(real);
        assert!(!strong);
    }

    #[test]
    fn diagonal_reality_examples() {
        // q = 5 so that determinants outside {1, -1} exist
        let h = handle(5, 1, GroupKind::Gl2);
        let part = conjugacy_partition(&h);
        let oracle = RealityOracle::new(&h, &part);
        let r = &h.ring;
        // diag(x, x^{-1}) is real; diag(x, y) with xy not +-1 is not
        let m = Mat2::from_codes(r, [2, 0, 0, r.c_inv(2).unwrap()]);
        assert!(oracle.is_real(&m).0);
        let bad = Mat2::from_codes(r, [1, 0, 0, 2]); // det 2, not +-1
        assert!(!oracle.is_real(&bad).0);
        assert!(!oracle.criteria(&bad, None).0);
    }
}
