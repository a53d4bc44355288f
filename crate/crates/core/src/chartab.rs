//! Exact character tables by the modular (Dixon-style) method, and the
//! layers built on top of them: Frobenius-Schur indicators, self-dual
//! censuses, restriction typing of characters through the last
//! congruence subgroup, and tangibility of regular characters.
//!
//! All character values live in a prime field `F_m` with
//! `m = 1 (mod exponent(G))` and `m > 2 sqrt(|G|)`: the class-sum
//! matrices commute and are simultaneously diagonalizable over `F_m`,
//! their common eigenvectors are the central characters, and degrees
//! are recovered exactly from the orthogonality relation because they
//! are bounded by `sqrt(|G|) < m/2`. Equality tests mod `m` are sound:
//! distinct irreducible characters stay distinct mod `m` by
//! orthogonality. Complex lifts exist for reporting only and never
//! feed an assertion.

use crate::census::Partition;
use crate::classify::{self, orbit_type, OrbitType};
use crate::matgroups::{identity, mat_mul, GroupHandle, Mat2};
use crate::modlin::{
    addm, charpoly, invm, kernel_basis, mulm, mult_order, powm, roots_by_scan, rref, sqrtm, subm,
    MatF,
};
use crate::{Error, Result};
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};

/// Conjugacy-class combinatorics needed by the character machinery.
pub struct ClassData {
    pub k: usize,
    pub sizes: Vec<u64>,
    pub reps: Vec<u32>,
    pub members: Vec<Vec<u32>>,
    pub class_of: Vec<u32>,
    pub inverse_class: Vec<u32>,
    pub square_class: Vec<u32>,
    pub rep_orders: Vec<u64>,
    pub exponent: u64,
    pub identity_class: u32,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn class_structure(h: &GroupHandle, part: &Partition) -> ClassData {
    let k = part.num_classes();
    let mut members = vec![Vec::new(); k];
    for (i, &c) in part.class_of.iter().enumerate() {
        members[c as usize].push(i as u32);
    }
    let rep_orders: Vec<u64> = part.reps.iter().map(|&r| h.element_order(r)).collect();
    let exponent = rep_orders
        .iter()
        .fold(1u64, |acc, &o| acc / gcd(acc, o) * o);
    ClassData {
        k,
        sizes: part.sizes.clone(),
        reps: part.reps.clone(),
        members,
        class_of: part.class_of.clone(),
        inverse_class: part.inverse_class_map(h),
        square_class: part.square_class_map(h),
        rep_orders,
        exponent,
        identity_class: part.class_of[h.identity_index() as usize],
    }
}

impl ClassData {
    /// Class-sum matrix `(B_i)[j][t] = a_{ijt}`, the number of ways an
    /// element of class `t` factors as (element of class `i`) times
    /// (element of class `j`).
    pub fn class_matrix(&self, h: &GroupHandle, i: usize, m: u64) -> MatF {
        let mut b = MatF::zeros(self.k, self.k);
        let ring = &h.ring;
        for t in 0..self.k {
            let z = h.elem(self.reps[t]);
            for &x in &self.members[i] {
                let xinv = h.elem(h.inverse_of(x));
                let y = mat_mul(ring, xinv, z);
                let j = self.class_of[h.index_of(&y).expect("closed") as usize] as usize;
                let v = b.at(j, t);
                b.set(j, t, addm(v, 1 % m, m));
            }
        }
        b
    }

    /// Direct double-loop recount of `a_{ijt}` (independent oracle for
    /// the single-pass construction above).
    pub fn coefficient_recount(&self, h: &GroupHandle, i: usize, j: usize, t: usize) -> u64 {
        let ring = &h.ring;
        let z = h.elem(self.reps[t]);
        let mut count = 0;
        for &x in &self.members[i] {
            for &y in &self.members[j] {
                if mat_mul(ring, h.elem(x), h.elem(y)) == *z {
                    count += 1;
                }
            }
        }
        count
    }

    /// `sum r_i B_i` over a sparse set of class indices, assembled by
    /// sweeping only the members of the chosen classes.
    fn combo_matrix(&self, h: &GroupHandle, terms: &[(usize, u64)], m: u64) -> MatF {
        let ring = &h.ring;
        let mut mat = MatF::zeros(self.k, self.k);
        for t in 0..self.k {
            let z = h.elem(self.reps[t]);
            for &(i, ri) in terms {
                for &x in &self.members[i] {
                    let xinv = h.elem(h.inverse_of(x));
                    let y = mat_mul(ring, xinv, z);
                    let j = self.class_of[h.index_of(&y).expect("closed") as usize] as usize;
                    let v = mat.at(j, t);
                    mat.set(j, t, addm(v, ri, m));
                }
            }
        }
        mat
    }
}

/// An exact modular character table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CharTable {
    pub modulus: u64,
    pub exponent: u64,
    /// Fixed primitive `exponent`-th root of unity mod `modulus`.
    pub zeta: u64,
    pub k: usize,
    /// Row-major residues: `values[chi * k + class]`.
    pub values: Vec<u64>,
    pub degrees: Vec<u64>,
    pub fs: Vec<i8>,
    pub real_valued: Vec<bool>,
}

impl CharTable {
    #[inline]
    pub fn value(&self, chi: usize, class: usize) -> u64 {
        self.values[chi * self.k + class]
    }

    pub fn row(&self, chi: usize) -> &[u64] {
        &self.values[chi * self.k..(chi + 1) * self.k]
    }
}

fn admissible_moduli(exponent: u64, group_order: u64) -> impl Iterator<Item = u64> {
    let bound = 2 * (group_order as f64).sqrt().ceil() as u64 + 1;
    (1u64..).map(move |r| r * exponent + 1).filter(move |&m| {
        m > bound && {
            let mut d = 2;
            while d * d <= m {
                if m % d == 0 {
                    return false;
                }
                d += 1;
            }
            true
        }
    })
}

struct Sub {
    basis: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

fn make_sub(mut rows: Vec<Vec<u64>>, m: u64) -> Sub {
    let pivots = rref(&mut rows, m);
    Sub {
        basis: rows,
        pivots,
    }
}

/// Split the common eigenspaces of the class-sum family using seeded
/// random combinations; returns the normalized central characters
/// (omega vectors) or `None` when this modulus failed to separate
/// within the round budget.
fn split_omegas(h: &GroupHandle, cd: &ClassData, m: u64, seed: u64) -> Option<Vec<Vec<u64>>> {
    let k = cd.k;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut subs: Vec<Sub> = vec![make_sub(
        (0..k)
            .map(|i| {
                let mut v = vec![0u64; k];
                v[i] = 1;
                v
            })
            .collect(),
        m,
    )];
    for _round in 0..64 {
        if subs.iter().all(|s| s.basis.len() == 1) {
            break;
        }
        // a random combination of a handful of class matrices: still a
        // member of the commuting class algebra (so the omega vectors
        // remain its eigenvectors) but far cheaper to assemble than a
        // full-support combination when k is large
        let span = k.min(12);
        let mut terms: Vec<(usize, u64)> = Vec::with_capacity(span);
        for _ in 0..span {
            let i = (rng.next_u64() % k as u64) as usize;
            let ri = 1 + rng.next_u64() % (m - 1);
            terms.push((i, ri));
        }
        let combo = cd.combo_matrix(h, &terms, m);
        let mut next: Vec<Sub> = Vec::with_capacity(subs.len());
        for sub in subs {
            let d = sub.basis.len();
            if d == 1 {
                next.push(sub);
                continue;
            }
            // action of the combo on this invariant subspace, in
            // basis coordinates
            let mut x = MatF::zeros(d, d);
            let mut ok = true;
            for t in 0..d {
                let mut w = vec![0u64; k];
                for (col, wv) in w.iter_mut().enumerate() {
                    let mut acc = 0u64;
                    for c in 0..k {
                        acc = addm(acc, mulm(combo.at(col, c), sub.basis[t][c], m), m);
                    }
                    *wv = acc;
                }
                let coords: Vec<u64> = (0..d).map(|s| w[sub.pivots[s]]).collect();
                // verify the subspace is invariant
                for col in 0..k {
                    let mut acc = 0u64;
                    for s in 0..d {
                        acc = addm(acc, mulm(coords[s], sub.basis[s][col], m), m);
                    }
                    if acc != w[col] {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    break;
                }
                for s in 0..d {
                    x.set(s, t, coords[s]);
                }
            }
            if !ok {
                return None;
            }
            let cp = charpoly(&x, m);
            let roots = roots_by_scan(&cp, m);
            let mut split_dim = 0;
            let mut pieces: Vec<Sub> = Vec::new();
            for lam in roots {
                let mut shifted = x.clone();
                for s in 0..d {
                    shifted.set(s, s, subm(x.at(s, s), lam, m));
                }
                let ker = kernel_basis(&shifted, m);
                if ker.is_empty() {
                    continue;
                }
                split_dim += ker.len();
                let rows: Vec<Vec<u64>> = ker
                    .iter()
                    .map(|c| {
                        let mut v = vec![0u64; k];
                        for (col, vv) in v.iter_mut().enumerate() {
                            let mut acc = 0u64;
                            for t in 0..d {
                                acc = addm(acc, mulm(c[t], sub.basis[t][col], m), m);
                            }
                            *vv = acc;
                        }
                        v
                    })
                    .collect();
                pieces.push(make_sub(rows, m));
            }
            if split_dim != d {
                // the combo was not diagonalizable on this subspace:
                // cannot happen for a commuting family, so the modulus
                // arithmetic went degenerate
                return None;
            }
            next.extend(pieces);
        }
        subs = next;
    }
    if !subs.iter().all(|s| s.basis.len() == 1) {
        return None;
    }
    let idc = cd.identity_class as usize;
    let mut omegas = Vec::with_capacity(k);
    for sub in subs {
        let v = &sub.basis[0];
        if v[idc] == 0 {
            return None;
        }
        let inv = invm(v[idc], m);
        omegas.push(v.iter().map(|&x| mulm(x, inv, m)).collect());
    }
    Some(omegas)
}

/// Compute the character table: choose the least admissible modulus,
/// split the class-sum family, recover exact degrees, validate both
/// orthogonality relations, and flag real-valued characters.
pub fn character_table(h: &GroupHandle, cd: &ClassData, seed: u64) -> Result<CharTable> {
    let mut last_err = String::new();
    for (attempt, m) in admissible_moduli(cd.exponent, h.order).take(4).enumerate() {
        let omegas = match split_omegas(h, cd, m, seed) {
            Some(o) => o,
            None => {
                last_err = format!("splitting failed at modulus {m}");
                continue;
            }
        };
        match finish_table(h, cd, m, omegas) {
            Ok(t) => return Ok(t),
            Err(e) => {
                last_err = format!("modulus {m}: {e}");
                if attempt == 3 {
                    break;
                }
            }
        }
    }
    Err(Error::CharTable(format!(
        "no admissible modulus produced a table: {last_err}"
    )))
}

fn finish_table(h: &GroupHandle, cd: &ClassData, m: u64, omegas: Vec<Vec<u64>>) -> Result<CharTable> {
    let k = cd.k;
    let gm = (h.order % m) as u64;
    let inv_sizes: Vec<u64> = cd.sizes.iter().map(|&s| invm(s % m, m)).collect();
    let mut rows: Vec<(u64, Vec<u64>)> = Vec::with_capacity(k);
    for omega in &omegas {
        let mut s = 0u64;
        for i in 0..k {
            let t = mulm(omega[i], omega[cd.inverse_class[i] as usize], m);
            s = addm(s, mulm(t, inv_sizes[i], m), m);
        }
        if s == 0 {
            return Err(Error::CharTable("degenerate norm for an omega vector".into()));
        }
        let d2 = mulm(gm, invm(s, m), m);
        let d = sqrtm(d2, m)
            .ok_or_else(|| Error::CharTable("degree squared has no square root".into()))?;
        let d = d.min(m - d);
        if d == 0 {
            return Err(Error::CharTable("zero degree".into()));
        }
        let values: Vec<u64> = (0..k)
            .map(|i| mulm(mulm(d, omega[i], m), inv_sizes[i], m))
            .collect();
        rows.push((d, values));
    }
    rows.sort();
    let degrees: Vec<u64> = rows.iter().map(|r| r.0).collect();
    let values: Vec<u64> = rows.iter().flat_map(|r| r.1.iter().copied()).collect();

    // sum of squared degrees is the group order, exactly
    let sum_sq: u128 = degrees.iter().map(|&d| (d as u128) * (d as u128)).sum();
    if sum_sq != h.order as u128 {
        return Err(Error::CharTable(format!(
            "degree check failed: sum of squares {sum_sq} != {}",
            h.order
        )));
    }

    let table_value = |chi: usize, c: usize| values[chi * k + c];

    // row orthogonality
    for a in 0..k {
        for b in 0..k {
            let mut s = 0u64;
            for i in 0..k {
                let t = mulm(
                    table_value(a, i),
                    table_value(b, cd.inverse_class[i] as usize),
                    m,
                );
                s = addm(s, mulm(cd.sizes[i] % m, t, m), m);
            }
            let expect = if a == b { gm } else { 0 };
            if s != expect {
                return Err(Error::CharTable("row orthogonality failed".into()));
            }
        }
    }
    // column orthogonality: sum over characters of chi(i) chi(j*) is
    // |centralizer| on the diagonal
    for i in 0..k {
        for j in 0..k {
            let mut s = 0u64;
            for chi in 0..k {
                s = addm(
                    s,
                    mulm(
                        table_value(chi, i),
                        table_value(chi, cd.inverse_class[j] as usize),
                        m,
                    ),
                    m,
                );
            }
            let expect = if i == j {
                mulm(gm, inv_sizes[i], m)
            } else {
                0
            };
            if s != expect {
                return Err(Error::CharTable("column orthogonality failed".into()));
            }
        }
    }

    // real-valued detection: the conjugate of a row is a row; real
    // means it is the same row
    let mut row_index: HashMap<&[u64], usize> = HashMap::new();
    for chi in 0..k {
        row_index.insert(&values[chi * k..(chi + 1) * k], chi);
    }
    let mut real_valued = Vec::with_capacity(k);
    for chi in 0..k {
        let conj_row: Vec<u64> = (0..k)
            .map(|c| table_value(chi, cd.inverse_class[c] as usize))
            .collect();
        match row_index.get(conj_row.as_slice()) {
            Some(&other) => real_valued.push(other == chi),
            None => {
                return Err(Error::CharTable(
                    "conjugate of a character is not a character".into(),
                ))
            }
        }
    }

    // a fixed primitive root of unity of order exponent(G)
    let mut zeta = 0;
    for z in 2..m {
        if powm(z, cd.exponent, m) == 1 && mult_order(z, m) == cd.exponent {
            zeta = z;
            break;
        }
    }
    if zeta == 0 {
        return Err(Error::CharTable("no primitive root of unity found".into()));
    }

    Ok(CharTable {
        modulus: m,
        exponent: cd.exponent,
        zeta,
        k,
        values,
        degrees,
        fs: Vec::new(),
        real_valued,
    })
}

/// Frobenius-Schur indicators
/// `nu(chi) = |G|^{-1} sum_c |c| chi(square(c))`, recognized in
/// `{-1, 0, +1}` mod `m`, plus the aggregate identity
/// `sum nu(chi) deg(chi) = #involutions`.
pub fn fs_indicators(h: &GroupHandle, table: &mut CharTable, cd: &ClassData) -> Result<()> {
    let m = table.modulus;
    let ginv = invm(h.order % m, m);
    let mut fs = Vec::with_capacity(table.k);
    for chi in 0..table.k {
        let mut s = 0u64;
        for c in 0..cd.k {
            s = addm(
                s,
                mulm(cd.sizes[c] % m, table.value(chi, cd.square_class[c] as usize), m),
                m,
            );
        }
        let nu = mulm(s, ginv, m);
        let v = if nu == 0 {
            0i8
        } else if nu == 1 {
            1
        } else if nu == m - 1 {
            -1
        } else {
            return Err(Error::CharTable(format!(
                "Frobenius-Schur indicator {nu} outside {{-1, 0, 1}}"
            )));
        };
        fs.push(v);
    }
    let aggregate: i128 = fs
        .iter()
        .zip(&table.degrees)
        .map(|(&nu, &d)| nu as i128 * d as i128)
        .sum();
    let involutions = crate::reality::involutions(h).len() as i128;
    if aggregate != involutions {
        return Err(Error::Falsified(format!(
            "sum nu(chi) deg(chi) = {aggregate} but the group has {involutions} involutions"
        )));
    }
    table.fs = fs;
    Ok(())
}

/// Sums over the self-dual characters: the number of real-valued
/// characters and the degree sums by indicator sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfDualCensus {
    pub real_char_count: u64,
    pub orthogonal_dim_sum: u64,
    pub symplectic_dim_sum: u64,
}

pub fn self_dual_census(table: &CharTable) -> SelfDualCensus {
    let mut real_char_count = 0;
    let mut a = 0u64;
    let mut b = 0u64;
    for chi in 0..table.k {
        if table.real_valued[chi] {
            real_char_count += 1;
        }
        match table.fs[chi] {
            1 => a += table.degrees[chi],
            -1 => b += table.degrees[chi],
            _ => {}
        }
    }
    SelfDualCensus {
        real_char_count,
        orthogonal_dim_sum: a,
        symplectic_dim_sum: b,
    }
}

/// The duality `g(o_1) = dual of K^(l-1)`: the character
/// `psi_A(I + pi^(l-1) B) = psi(pi^(l-1) tr(A~ B))` tabulated mod `m`
/// for every `A`, together with the adjoint orbits of `g(o_1)` under
/// the level-1 group.
pub struct Duality {
    pub lie: Vec<Mat2>,
    pub lie_index: HashMap<Mat2, u32>,
    pub k_elems: Vec<u32>,
    /// `psi[a][t]` = value of `psi_A` at the `t`-th element of
    /// `K^(l-1)`, and its inverse table.
    pub psi: MatF,
    pub psi_inv: MatF,
    pub orbit_of: Vec<u32>,
    pub orbit_sizes: Vec<u64>,
    pub orbit_reps: Vec<Mat2>,
}

pub fn duality_data(h: &GroupHandle, h1: &GroupHandle, table: &CharTable) -> Result<Duality> {
    let ring = &h.ring;
    let l = ring.level;
    if l < 2 {
        return Err(Error::CharTable("duality requires level >= 2".into()));
    }
    let r1 = ring.truncated(1)?;
    if h1.ring.key() != r1.key() {
        return Err(Error::Internal("level-1 handle has the wrong ring".into()));
    }
    let m = table.modulus;
    let lie = crate::matgroups::lie_algebra(&r1, h.kind);
    let k_elems = h.congruence_subgroup(l - 1);
    if lie.len() != k_elems.len() {
        return Err(Error::Falsified(format!(
            "K^(l-1) has {} elements but g(o_1) has {}",
            k_elems.len(),
            lie.len()
        )));
    }
    // psi(arg) where arg = pi^(l-1) tr(A~ B~): a root of unity of
    // order dividing the additive order of psi
    let (_, ord) = ring.psi_exponent(ring.zero());
    if table.exponent % ord != 0 {
        return Err(Error::CharTable(
            "additive character order does not divide the group exponent".into(),
        ));
    }
    let zeta_ord = powm(table.zeta, table.exponent / ord, m);
    let q_shift = ring.base_size() / ring.q; // q^(l-1) as a digit shift
    let shift_down = |code: u64| -> u64 {
        if ring.extended {
            let (x, y) = ring.split(code);
            (x / q_shift) * r1.base_size() + (y / q_shift)
        } else {
            code / q_shift
        }
    };
    let pi_l1 = classify::pow_code(ring, ring.c_pi(), l - 1);
    let mut psi = MatF::zeros(lie.len(), k_elems.len());
    let mut psi_inv = MatF::zeros(lie.len(), k_elems.len());
    let id = identity(ring);
    for (t, &kidx) in k_elems.iter().enumerate() {
        let g = h.elem(kidx);
        let diff = crate::matgroups::mat_sub(ring, g, &id);
        let b1 = Mat2::from_codes(&r1, diff.codes().map(shift_down));
        let b_lift = classify::lift_mat(&r1, ring, &b1);
        for (ai, a) in lie.iter().enumerate() {
            let a_lift = classify::lift_mat(&r1, ring, a);
            let trace = crate::matgroups::tr(ring, &mat_mul(ring, &a_lift, &b_lift));
            let arg = ring.elem(ring.c_mul(pi_l1, trace.code()));
            let (expn, o) = ring.psi_exponent(arg);
            debug_assert_eq!(o, ord);
            psi.set(ai, t, powm(zeta_ord, expn, m));
            psi_inv.set(ai, t, powm(zeta_ord, (ord - expn) % ord, m));
        }
    }
    // the characters psi_A must be pairwise distinct (perfect duality)
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    for ai in 0..lie.len() {
        if !seen.insert(psi.row(ai).to_vec()) {
            return Err(Error::Falsified(
                "two orbit data give the same character of K^(l-1)".into(),
            ));
        }
    }
    // adjoint orbits of g(o_1) under the level-1 group
    let mut lie_index = HashMap::new();
    for (i, a) in lie.iter().enumerate() {
        lie_index.insert(*a, i as u32);
    }
    let mut orbit_of = vec![u32::MAX; lie.len()];
    let mut orbit_reps = Vec::new();
    let mut orbit_sizes = Vec::new();
    for i in 0..lie.len() {
        if orbit_of[i] != u32::MAX {
            continue;
        }
        let oid = orbit_reps.len() as u32;
        orbit_reps.push(lie[i]);
        orbit_of[i] = oid;
        let mut size = 1u64;
        let mut stack = vec![lie[i]];
        while let Some(x) = stack.pop() {
            for &gidx in h1.generators() {
                let g = h1.elem(gidx);
                let gi = h1.elem(h1.inverse_of(gidx));
                let y = mat_mul(&r1, &mat_mul(&r1, g, &x), gi);
                let yi = lie_index[&y] as usize;
                if orbit_of[yi] == u32::MAX {
                    orbit_of[yi] = oid;
                    size += 1;
                    stack.push(y);
                }
            }
        }
        orbit_sizes.push(size);
    }
    Ok(Duality {
        lie,
        lie_index,
        k_elems,
        psi,
        psi_inv,
        orbit_of,
        orbit_sizes,
        orbit_reps,
    })
}

/// Per-character restriction data: the adjoint orbit of data `A` whose
/// characters occur in the restriction to `K^(l-1)`, and the induced
/// type label.
pub struct RestrictionTyping {
    pub types: Vec<OrbitType>,
    /// Least element of the occurring orbit, in `g(o_1)`.
    pub datum: Vec<Mat2>,
    pub orbit_id: Vec<u32>,
}

/// Decompose each character's restriction to `K^(l-1)` against the
/// `psi_A` and type it by the (unique) occurring adjoint orbit.
pub fn restriction_typing(
    h: &GroupHandle,
    table: &CharTable,
    cd: &ClassData,
    dual: &Duality,
) -> Result<RestrictionTyping> {
    let r1 = h.ring.truncated(1)?;
    let m = table.modulus;
    let nk = dual.k_elems.len() as u64;
    let inv_nk = invm(nk % m, m);
    // class of each K element, fixed once
    let k_classes: Vec<usize> = dual
        .k_elems
        .iter()
        .map(|&i| cd.class_of[i as usize] as usize)
        .collect();
    let mut types = Vec::with_capacity(table.k);
    let mut datum = Vec::with_capacity(table.k);
    let mut orbit_id = Vec::with_capacity(table.k);
    for chi in 0..table.k {
        let chi_on_k: Vec<u64> = k_classes.iter().map(|&c| table.value(chi, c)).collect();
        let mut occurring: Vec<u32> = Vec::new();
        for ai in 0..dual.lie.len() {
            let mut s = 0u64;
            for t in 0..chi_on_k.len() {
                s = addm(s, mulm(chi_on_k[t], dual.psi_inv.at(ai, t), m), m);
            }
            let mult = mulm(s, inv_nk, m);
            if mult != 0 {
                occurring.push(ai as u32);
            }
        }
        if occurring.is_empty() {
            return Err(Error::CharTable(format!(
                "character {chi} has empty restriction decomposition"
            )));
        }
        let oid = dual.orbit_of[occurring[0] as usize];
        let same_orbit = occurring
            .iter()
            .all(|&ai| dual.orbit_of[ai as usize] == oid);
        if !same_orbit || occurring.len() as u64 != dual.orbit_sizes[oid as usize] {
            return Err(Error::CharTable(format!(
                "occurring data of character {chi} are not a single adjoint orbit"
            )));
        }
        let least = occurring
            .iter()
            .map(|&ai| dual.lie[ai as usize])
            .min()
            .unwrap();
        types.push(orbit_type(&r1, &least));
        datum.push(least);
        orbit_id.push(oid);
    }
    Ok(RestrictionTyping {
        types,
        datum,
        orbit_id,
    })
}

/// Tangibility record for one regular character: the orbit datum, the
/// anti-symmetry witness condition `A + g A g^{-1} = 0` (T1), and the
/// triviality of the restriction to `Z_A` (T2).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TangibleRecord {
    pub char_index: usize,
    pub orbit_type: OrbitType,
    pub t1: bool,
    pub t2: bool,
    pub tangible: bool,
    pub real_valued: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TangibilityReport {
    pub records: Vec<TangibleRecord>,
    pub m_ss: u64,
    pub m_sns: u64,
    pub m_cus: u64,
    pub non_regular_self_dual: u64,
    /// Regular characters where tangible and self-dual disagree.
    pub equivalence_violations: Vec<usize>,
}

/// Evaluate T1 and T2 for every regular character and tally the
/// tangible counts by type. Valid for levels 2 and 3, where the datum
/// recovered from `K^(l-1)` lives at level `floor(l/2) = 1`.
pub fn tangibility_census(
    h: &GroupHandle,
    h1: &GroupHandle,
    table: &CharTable,
    cd: &ClassData,
    dual: &Duality,
    typing: &RestrictionTyping,
) -> Result<TangibilityReport> {
    let ring = &h.ring;
    let l = ring.level;
    if !(2..=3).contains(&l) {
        return Err(Error::CharTable(
            "tangibility is computed at levels 2 and 3".into(),
        ));
    }
    let r1 = ring.truncated(1)?;
    let m = table.modulus;
    let z_indices = classify::center(h);
    let mut records = Vec::new();
    let mut m_ss = 0u64;
    let mut m_sns = 0u64;
    let mut m_cus = 0u64;
    let mut non_regular_self_dual = 0u64;
    let mut violations = Vec::new();
    for chi in 0..table.k {
        let ty = typing.types[chi];
        if ty == OrbitType::Nreg {
            if table.real_valued[chi] {
                non_regular_self_dual += 1;
            }
            continue;
        }
        let a = typing.datum[chi];
        // T1: -A lies in the adjoint orbit of A
        let neg_a = crate::matgroups::mat_neg(&r1, &a);
        let t1 = dual.orbit_of[dual.lie_index[&neg_a] as usize]
            == dual.orbit_of[dual.lie_index[&a] as usize];
        // T2: the restriction of chi to Z_A contains the trivial
        // character; Z_A is cut out by the determinant image of the
        // level-1 centralizer of A
        let mut dets: HashSet<u64> = HashSet::new();
        for g in h1.elements() {
            if mat_mul(&r1, g, &a) == mat_mul(&r1, &a, g) {
                dets.insert(crate::matgroups::det(&r1, g).code());
            }
        }
        let mut s = 0u64;
        for &zi in &z_indices {
            let x = h.elem(zi).codes()[0];
            if dets.contains(&ring.c_project(&r1, x)) {
                let c = cd.class_of[zi as usize] as usize;
                s = addm(s, table.value(chi, c), m);
            }
        }
        let t2 = s != 0;
        let tangible = t1 && t2;
        if tangible {
            match ty {
                OrbitType::Ss => m_ss += 1,
                OrbitType::Sns => m_sns += 1,
                OrbitType::Cus => m_cus += 1,
                OrbitType::Nreg => unreachable!(),
            }
        }
        if tangible != table.real_valued[chi] {
            violations.push(chi);
        }
        records.push(TangibleRecord {
            char_index: chi,
            orbit_type: ty,
            t1,
            t2,
            tangible,
            real_valued: table.real_valued[chi],
        });
    }
    Ok(TangibilityReport {
        records,
        m_ss,
        m_sns,
        m_cus,
        non_regular_self_dual,
        equivalence_violations: violations,
    })
}

/// Closed forms for the tangible counts:
/// `m_ss = q^(l-2)(q-1)^2 / 2`, `m_cus = q^(l-2)(q^2-1) / 2`,
/// `m_sns = 2 q^(l-1)`.
pub fn tangible_count_formula(q: u64, level: u32) -> (u64, u64, u64) {
    let ql2 = q.pow(level - 2);
    (
        ql2 * (q - 1) * (q - 1) / 2,
        2 * q.pow(level - 1),
        ql2 * (q * q - 1) / 2,
    )
}

/// Complex lifts of the whole table, for reporting: per class, the
/// power map of the representative decomposes every character value
/// into root-of-unity multiplicities, evaluated in floating point.
/// Indexed `[character][class]`.
pub fn complex_lifts(h: &GroupHandle, table: &CharTable, cd: &ClassData) -> Vec<Vec<(f64, f64)>> {
    let m = table.modulus;
    let mut out = vec![vec![(0.0f64, 0.0f64); cd.k]; table.k];
    for c in 0..cd.k {
        let ord = cd.rep_orders[c] as usize;
        let g = h.elem(cd.reps[c]);
        let mut power_classes = Vec::with_capacity(ord);
        let mut acc = identity(&h.ring);
        for _ in 0..ord {
            power_classes.push(cd.class_of[h.index_of(&acc).expect("closed") as usize] as usize);
            acc = mat_mul(&h.ring, &acc, g);
        }
        let zk = powm(table.zeta, table.exponent / ord as u64, m);
        let mut zk_inv_pow = vec![1u64; ord];
        if ord > 1 {
            let zk_inv = invm(zk, m);
            for i in 1..ord {
                zk_inv_pow[i] = mulm(zk_inv_pow[i - 1], zk_inv, m);
            }
        }
        let inv_ord = invm(ord as u64 % m, m);
        for chi in 0..table.k {
            let mut re = 0.0;
            let mut im = 0.0;
            for t in 0..ord {
                let mut s = 0u64;
                for (sidx, &pc) in power_classes.iter().enumerate() {
                    s = addm(s, mulm(table.value(chi, pc), zk_inv_pow[t * sidx % ord], m), m);
                }
                let mult = mulm(s, inv_ord, m);
                if mult != 0 {
                    let angle = 2.0 * std::f64::consts::PI * (t as f64) / (ord as f64);
                    re += mult as f64 * angle.cos();
                    im += mult as f64 * angle.sin();
                }
            }
            out[chi][c] = (re, im);
        }
    }
    out
}

/// Complex lift of a character value, for reporting: decompose
/// `chi(g)` into root-of-unity multiplicities via the power map of the
/// class representative and evaluate in floating point.
pub fn complex_value(
    h: &GroupHandle,
    table: &CharTable,
    cd: &ClassData,
    chi: usize,
    class: usize,
) -> (f64, f64) {
    let m = table.modulus;
    let ord = cd.rep_orders[class];
    let g = h.elem(cd.reps[class]);
    // classes of the powers g^s
    let mut power_classes = Vec::with_capacity(ord as usize);
    let mut acc = identity(&h.ring);
    for _ in 0..ord {
        power_classes.push(cd.class_of[h.index_of(&acc).expect("closed") as usize] as usize);
        acc = mat_mul(&h.ring, &acc, g);
    }
    let zk = powm(table.zeta, table.exponent / ord, m);
    let inv_ord = invm(ord % m, m);
    let mut re = 0.0f64;
    let mut im = 0.0f64;
    for t in 0..ord {
        // multiplicity of zeta_ord^t among the eigenvalues
        let mut s = 0u64;
        for (sidx, &pc) in power_classes.iter().enumerate() {
            let w = powm(zk, (t as u128 * sidx as u128 % ord as u128) as u64, m);
            // chi(g^s) zeta^{-st}
            s = addm(s, mulm(table.value(chi, pc), invm(w, m), m), m);
        }
        let mult = mulm(s, inv_ord, m);
        if mult != 0 {
            let angle = 2.0 * std::f64::consts::PI * (t as f64) / (ord as f64);
            re += mult as f64 * angle.cos();
            im += mult as f64 * angle.sin();
        }
    }
    (re, im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::conjugacy_partition;
    use crate::matgroups::{GroupHandle, GroupKind};
    use crate::rings::{Ring, RingFamily};

    fn bundle(p: u64, level: u32, kind: GroupKind) -> (GroupHandle, Partition) {
        let ring = Ring::new(RingFamily::Mixed, p, 1, level, kind == GroupKind::Gu2).unwrap();
        let h = GroupHandle::enumerate(ring, kind, 1 << 24).unwrap();
        let part = conjugacy_partition(&h);
        (h, part)
    }

    #[test]
    fn class_maps_basic() {
        let (h, part) = bundle(3, 1, GroupKind::Gl2);
        let cd = class_structure(&h, &part);
        // inverse map is an involution
        for c in 0..cd.k {
            assert_eq!(
                cd.inverse_class[cd.inverse_class[c] as usize] as usize,
                c
            );
        }
        // the Weyl class squares into the identity class
        let w = crate::matgroups::weyl(&h.ring);
        let wc = cd.class_of[h.index_of(&w).unwrap() as usize] as usize;
        assert_eq!(cd.square_class[wc], cd.identity_class);
        assert_eq!(cd.inverse_class[cd.identity_class as usize], cd.identity_class);
    }

    #[test]
    fn coefficient_single_pass_matches_recount() {
        let (h, part) = bundle(3, 1, GroupKind::Gu2);
        let cd = class_structure(&h, &part);
        let m = 1_000_003; // large enough to avoid wraparound
        use rand_core::{RngCore, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let i = (rng.next_u64() % cd.k as u64) as usize;
            let j = (rng.next_u64() % cd.k as u64) as usize;
            let t = (rng.next_u64() % cd.k as u64) as usize;
            let b = cd.class_matrix(&h, i, m);
            assert_eq!(b.at(j, t), cd.coefficient_recount(&h, i, j, t));
        }
    }

    #[test]
    fn gl2_f3_table() {
        let (h, part) = bundle(3, 1, GroupKind::Gl2);
        let cd = class_structure(&h, &part);
        let mut table = character_table(&h, &cd, 0x5EED).unwrap();
        assert_eq!(table.k, 8);
        let sum_sq: u64 = table.degrees.iter().map(|d| d * d).sum();
        assert_eq!(sum_sq, 48);
        // the trivial character is the all-ones row
        let ones = vec![1u64; 8];
        assert!((0..8).any(|chi| table.row(chi) == ones.as_slice()));
        fs_indicators(&h, &mut table, &cd).unwrap();
        let agg: i64 = table
            .fs
            .iter()
            .zip(&table.degrees)
            .map(|(&nu, &d)| nu as i64 * d as i64)
            .sum();
        assert_eq!(agg, 14);
        assert_eq!(table.fs[0], 1); // sorted first row is the trivial character
        // GL2: real-valued iff indicator +1
        for chi in 0..8 {
            assert_eq!(table.real_valued[chi], table.fs[chi] == 1);
        }
        let sd = self_dual_census(&table);
        assert_eq!(sd.real_char_count, 6);
        assert_eq!(sd.symplectic_dim_sum, 0);
    }

    #[test]
    fn gu2_f3_table() {
        let (h, part) = bundle(3, 1, GroupKind::Gu2);
        let cd = class_structure(&h, &part);
        let mut table = character_table(&h, &cd, 0x5EED).unwrap();
        assert_eq!(table.k, 16);
        let sum_sq: u64 = table.degrees.iter().map(|d| d * d).sum();
        assert_eq!(sum_sq, 96);
        fs_indicators(&h, &mut table, &cd).unwrap();
        let sd = self_dual_census(&table);
        // a_1 = q^2 + 1, b_1 = q - 1
        assert_eq!(sd.orthogonal_dim_sum, 10);
        assert_eq!(sd.symplectic_dim_sum, 2);
        assert_eq!(sd.real_char_count, 6);
        assert!(table.fs.iter().any(|&v| v == -1));
    }

    #[test]
    fn gl2_o2_table_typing_and_tangibility() {
        let (h, part) = bundle(3, 2, GroupKind::Gl2);
        let cd = class_structure(&h, &part);
        let mut table = character_table(&h, &cd, 0x5EED).unwrap();
        assert_eq!(table.k, 78);
        let sum_sq: u64 = table.degrees.iter().map(|d| d * d).sum();
        assert_eq!(sum_sq, 3888);
        // the regular character degrees (q+1)q, q^2-1, (q-1)q all occur
        for d in [12u64, 8, 6] {
            assert!(table.degrees.contains(&d));
        }
        fs_indicators(&h, &mut table, &cd).unwrap();
        let sd = self_dual_census(&table);
        assert_eq!(sd.real_char_count, 18);
        assert_eq!(sd.symplectic_dim_sum, 0);
        // real-valued iff orthogonal, character by character
        for chi in 0..table.k {
            assert_eq!(table.real_valued[chi], table.fs[chi] == 1);
        }

        let r1 = h.ring.truncated(1).unwrap();
        let h1 = GroupHandle::enumerate(r1, GroupKind::Gl2, 1 << 24).unwrap();
        let dual = duality_data(&h, &h1, &table).unwrap();
        let typing = restriction_typing(&h, &table, &cd, &dual).unwrap();
        // the trivial character restricts to psi_0: type nreg
        assert_eq!(typing.types[0], OrbitType::Nreg);
        assert_eq!(typing.datum[0].codes(), [0, 0, 0, 0]);
        // regular character counts by type match the inertia count:
        // 12 split semisimple, 18 split non-semisimple, 24 cuspidal
        let count = |ty: OrbitType| typing.types.iter().filter(|&&t| t == ty).count();
        assert_eq!(count(OrbitType::Ss), 12);
        assert_eq!(count(OrbitType::Sns), 18);
        assert_eq!(count(OrbitType::Cus), 24);
        assert_eq!(count(OrbitType::Nreg), 24);

        let tang = tangibility_census(&h, &h1, &table, &cd, &dual, &typing).unwrap();
        assert!(tang.equivalence_violations.is_empty());
        assert_eq!((tang.m_ss, tang.m_sns, tang.m_cus), (2, 6, 4));
        assert_eq!(tang.non_regular_self_dual, 6);
        assert_eq!(tangible_count_formula(3, 2), (2, 6, 4));
    }

    #[test]
    fn gu2_o2_table_typing_and_tangibility() {
        let (h, part) = bundle(3, 2, GroupKind::Gu2);
        let cd = class_structure(&h, &part);
        let mut table = character_table(&h, &cd, 0x5EED).unwrap();
        let sum_sq: u64 = table.degrees.iter().map(|d| d * d).sum();
        assert_eq!(sum_sq, 7776);
        fs_indicators(&h, &mut table, &cd).unwrap();
        let sd = self_dual_census(&table);
        assert_eq!(sd.real_char_count, 18);
        assert_eq!(sd.orthogonal_dim_sum, 82); // q^(2l) + 1
        assert_eq!(sd.symplectic_dim_sum, 26); // q^(2l-1) - 1

        let r1 = h.ring.truncated(1).unwrap();
        let h1 = GroupHandle::enumerate(r1, GroupKind::Gu2, 1 << 24).unwrap();
        let dual = duality_data(&h, &h1, &table).unwrap();
        let typing = restriction_typing(&h, &table, &cd, &dual).unwrap();
        // some symplectic character has regular type
        assert!((0..table.k)
            .any(|chi| table.fs[chi] == -1 && typing.types[chi] != OrbitType::Nreg));

        let tang = tangibility_census(&h, &h1, &table, &cd, &dual, &typing).unwrap();
        assert!(tang.equivalence_violations.is_empty());
        assert_eq!((tang.m_ss, tang.m_sns, tang.m_cus), (2, 6, 4));
        assert_eq!(tang.non_regular_self_dual, 6);
    }

    #[test]
    fn complex_lift_of_trivial_and_degrees() {
        let (h, part) = bundle(3, 1, GroupKind::Gl2);
        let cd = class_structure(&h, &part);
        let table = character_table(&h, &cd, 0x5EED).unwrap();
        for chi in 0..table.k {
            // value at the identity class lifts to the degree
            let (re, im) = complex_value(&h, &table, &cd, chi, cd.identity_class as usize);
            assert!((re - table.degrees[chi] as f64).abs() < 1e-9);
            assert!(im.abs() < 1e-9);
        }
        // the trivial character lifts to 1 everywhere
        for c in 0..cd.k {
            let (re, im) = complex_value(&h, &table, &cd, 0, c);
            assert!((re - 1.0).abs() < 1e-9 && im.abs() < 1e-9);
        }
    }
}
