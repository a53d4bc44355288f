//! Conjugacy partition and the real-class census: brute-force counts
//! on one side, the closed-form counts on the other, compared field by
//! field.

use crate::classify::{self, group_class_type, table1_row_class_sets, Gu2Classification};
use crate::matgroups::{GroupHandle, GroupKind};
use crate::reality::RealityOracle;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Orbit partition of a group under conjugation. Class `c` has
/// representative `reps[c]`, the least member in canonical order.
pub struct Partition {
    pub class_of: Vec<u32>,
    pub reps: Vec<u32>,
    pub sizes: Vec<u64>,
}

/// BFS over generator conjugation from unvisited seeds in canonical
/// order; the seed of each orbit is automatically its least member.
pub fn conjugacy_partition(h: &GroupHandle) -> Partition {
    let n = h.order as usize;
    let mut class_of = vec![u32::MAX; n];
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    for seed in 0..n as u32 {
        if class_of[seed as usize] != u32::MAX {
            continue;
        }
        let cid = reps.len() as u32;
        reps.push(seed);
        class_of[seed as usize] = cid;
        let mut size = 1u64;
        let mut stack = vec![seed];
        while let Some(x) = stack.pop() {
            for &g in h.generators() {
                let y = h.conj_idx(g, x);
                if class_of[y as usize] == u32::MAX {
                    class_of[y as usize] = cid;
                    size += 1;
                    stack.push(y);
                }
            }
        }
        sizes.push(size);
    }
    Partition {
        class_of,
        reps,
        sizes,
    }
}

impl Partition {
    pub fn num_classes(&self) -> usize {
        self.reps.len()
    }

    /// Class index of each representative's inverse.
    pub fn inverse_class_map(&self, h: &GroupHandle) -> Vec<u32> {
        self.reps
            .iter()
            .map(|&r| self.class_of[h.inverse_of(r) as usize])
            .collect()
    }

    /// Class index of each representative's square.
    pub fn square_class_map(&self, h: &GroupHandle) -> Vec<u32> {
        self.reps
            .iter()
            .map(|&r| {
                let g = h.elem(r);
                let g2 = crate::matgroups::mat_mul(&h.ring, g, g);
                self.class_of[h.index_of(&g2).expect("closed") as usize]
            })
            .collect()
    }
}

/// Per-class record for reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConjClass {
    pub index: u32,
    pub representative: Vec<String>,
    pub size: u64,
    pub label: String,
    pub real: bool,
    pub strongly_real: bool,
    pub regular: bool,
    pub class_type: String,
}

/// One row of the real-class table for `GU2`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Row {
    pub regular: u64,
    pub non_regular: u64,
    pub strongly_real: u64,
}

/// Census totals; `table1` is filled for `GU2` only, and `classes` is
/// absent on the formula side for `GU2` (no closed form is tabulated
/// for the total class count there).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCensus {
    pub source: String,
    pub kind: String,
    pub q: u64,
    pub level: u32,
    pub classes: Option<u64>,
    pub real: u64,
    pub strongly_real: u64,
    pub real_regular: u64,
    pub real_non_regular: u64,
    pub table1: Option<[Table1Row; 5]>,
}

/// Brute-force census over an enumerated group. For `GU2` the real
/// classes are matched against the five representative families; a
/// real class matching no row, or two rows, is a hard error.
pub fn real_class_census(
    h: &GroupHandle,
    part: &Partition,
    oracle: &RealityOracle,
) -> Result<(ClassCensus, Vec<ConjClass>)> {
    let ring = &h.ring;
    let k = part.num_classes();
    let gu2_cls = match h.kind {
        GroupKind::Gu2 => Some(Gu2Classification::build(h, part)?),
        GroupKind::Gl2 => None,
    };
    let mut rows: Vec<ConjClass> = Vec::with_capacity(k);
    let mut real = 0u64;
    let mut strongly_real = 0u64;
    let mut real_regular = 0u64;
    let mut real_non_regular = 0u64;
    for c in 0..k {
        let rep = h.elem(part.reps[c]);
        let is_real = oracle.is_real_class(c as u32);
        let (is_strong, _) = if is_real {
            oracle.is_strongly_real(rep)
        } else {
            (false, None)
        };
        let regular = classify::is_regular(ring, rep);
        if is_real {
            real += 1;
            if regular {
                real_regular += 1;
            } else {
                real_non_regular += 1;
            }
            if is_strong {
                strongly_real += 1;
            }
        }
        let label = match h.kind {
            GroupKind::Gl2 => classify::gl2_canonical_form(ring, rep).label(),
            GroupKind::Gu2 => gu2_cls.as_ref().unwrap().reps[c].label(),
        };
        rows.push(ConjClass {
            index: c as u32,
            representative: rep
                .entries(ring)
                .iter()
                .map(|e| ring.elem_string(*e))
                .collect(),
            size: part.sizes[c],
            label,
            real: is_real,
            strongly_real: is_strong,
            regular,
            class_type: group_class_type(ring, h.kind, rep).as_str().to_string(),
        });
    }

    let table1 = match h.kind {
        GroupKind::Gl2 => None,
        GroupKind::Gu2 => Some(match_table1(h, part, &rows)?),
    };

    let census = ClassCensus {
        source: "bruteforce".into(),
        kind: h.kind.as_str().into(),
        q: ring.q,
        level: ring.level,
        classes: Some(k as u64),
        real,
        strongly_real,
        real_regular,
        real_non_regular,
        table1,
    };
    Ok((census, rows))
}

fn match_table1(
    h: &GroupHandle,
    part: &Partition,
    rows: &[ConjClass],
) -> Result<[Table1Row; 5]> {
    let row_sets = table1_row_class_sets(h, part)?;
    // rows must be pairwise disjoint and cover exactly the real classes
    let mut seen: BTreeSet<u32> = BTreeSet::new();
    for (ri, set) in row_sets.iter().enumerate() {
        for &c in set {
            if !seen.insert(c) {
                return Err(Error::Falsified(format!(
                    "class {c} matched by two rows of the real-class table"
                )));
            }
            if !rows[c as usize].real {
                return Err(Error::Falsified(format!(
                    "row {} contains the non-real class {c}",
                    ri + 1
                )));
            }
        }
    }
    for row in rows {
        if row.real && !seen.contains(&row.index) {
            return Err(Error::Falsified(format!(
                "real class {} ({}) matches no row of the real-class table",
                row.index, row.label
            )));
        }
    }
    let mut out = [Table1Row::default(); 5];
    for (ri, set) in row_sets.iter().enumerate() {
        for &c in set {
            let r = &rows[c as usize];
            if r.regular {
                out[ri].regular += 1;
            } else {
                out[ri].non_regular += 1;
            }
            if r.strongly_real {
                out[ri].strongly_real += 1;
            }
        }
    }
    Ok(out)
}

/// Closed-form census, pure integer arithmetic in `(q, level)`.
pub fn formula_report(kind: GroupKind, q: u64, level: u32) -> ClassCensus {
    let qi = |e: u32| -> u64 { q.pow(e) };
    let geo: u64 = (0..level).map(qi).sum(); // 1 + q + ... + q^(l-1)
    let real = 1 + qi(level) + 2 * geo;
    let real_regular = qi(level) + 1;
    let real_non_regular = 2 * geo;
    let strongly_real = match kind {
        GroupKind::Gl2 => real,
        GroupKind::Gu2 => qi(level) + 1,
    };
    let classes = match kind {
        GroupKind::Gl2 => Some(classify::gl2_form_count(q, level) as u64),
        GroupKind::Gu2 => None,
    };
    let table1 = match kind {
        GroupKind::Gl2 => None,
        GroupKind::Gu2 => {
            let geo_short: u64 = (0..level.saturating_sub(1)).map(qi).sum();
            Some([
                Table1Row {
                    regular: 0,
                    non_regular: 2,
                    strongly_real: 2,
                },
                Table1Row {
                    regular: (q - 3) * qi(level - 1) / 2,
                    non_regular: qi(level - 1) - 1,
                    strongly_real: (q - 1) * qi(level - 1) / 2 - 1,
                },
                Table1Row {
                    regular: 1,
                    non_regular: 0,
                    strongly_real: 1,
                },
                Table1Row {
                    regular: (q - 1) * qi(level - 1) / 2,
                    non_regular: qi(level - 1) - 1,
                    strongly_real: (q + 1) * qi(level - 1) / 2 - 1,
                },
                Table1Row {
                    regular: 2 * qi(level - 1),
                    non_regular: 2 * geo_short,
                    strongly_real: 0,
                },
            ])
        }
    };
    ClassCensus {
        source: "formula".into(),
        kind: kind.as_str().into(),
        q,
        level,
        classes,
        real,
        strongly_real,
        real_regular,
        real_non_regular,
        table1,
    }
}

/// Compare brute-force and formula censuses field by field; the claims
/// carry the first differing field loudly in their ids.
pub fn census_claims(brute: &ClassCensus, formula: &ClassCensus) -> Vec<crate::Claim> {
    let tag = format!("{}-q{}-l{}", brute.kind, brute.q, brute.level);
    let mut claims = vec![
        crate::Claim::new(
            &format!("real-class-count-{tag}"),
            "#real classes = 1 + q^l + 2 sum_{i<l} q^i",
            formula.real as i128,
            brute.real as i128,
        ),
        crate::Claim::new(
            &format!("strongly-real-class-count-{tag}"),
            if brute.kind == "gl2" {
                "#strongly real = #real"
            } else {
                "#strongly real = q^l + 1"
            },
            formula.strongly_real as i128,
            brute.strongly_real as i128,
        ),
        crate::Claim::new(
            &format!("real-regular-count-{tag}"),
            "#real regular classes = q^l + 1",
            formula.real_regular as i128,
            brute.real_regular as i128,
        ),
        crate::Claim::new(
            &format!("real-non-regular-count-{tag}"),
            "#real non-regular classes = 2 sum_{i<l} q^i",
            formula.real_non_regular as i128,
            brute.real_non_regular as i128,
        ),
    ];
    if let (Some(fc), Some(bc)) = (formula.classes, brute.classes) {
        claims.push(crate::Claim::new(
            &format!("class-count-{tag}"),
            "#classes = #canonical labels (parameter count)",
            fc as i128,
            bc as i128,
        ));
    }
    if let (Some(ft), Some(bt)) = (&formula.table1, &brute.table1) {
        for (i, (f, b)) in ft.iter().zip(bt.iter()).enumerate() {
            claims.push(crate::Claim::new(
                &format!("table1-row{}-regular-{tag}", i + 1),
                "real-class table row, regular column",
                f.regular as i128,
                b.regular as i128,
            ));
            claims.push(crate::Claim::new(
                &format!("table1-row{}-non-regular-{tag}", i + 1),
                "real-class table row, non-regular column",
                f.non_regular as i128,
                b.non_regular as i128,
            ));
            claims.push(crate::Claim::new(
                &format!("table1-row{}-strongly-real-{tag}", i + 1),
                "real-class table row, strongly-real column",
                f.strongly_real as i128,
                b.strongly_real as i128,
            ));
        }
    }
    claims
}

/// CSV rows for the class list: representative digits, size, label,
/// flags, type.
pub fn classes_to_csv(rows: &[ConjClass]) -> String {
    let mut out = String::from(
        "class,size,label,real,strongly_real,regular,type,rep_a11,rep_a12,rep_a21,rep_a22\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.index,
            r.size,
            r.label,
            r.real,
            r.strongly_real,
            r.regular,
            r.class_type,
            r.representative[0],
            r.representative[1],
            r.representative[2],
            r.representative[3],
        ));
    }
    out
}

/// Check that class sizes sum to the group order and divide it.
pub fn partition_sanity(h: &GroupHandle, part: &Partition) -> Result<()> {
    let total: u64 = part.sizes.iter().sum();
    if total != h.order {
        return Err(Error::Internal("class sizes do not sum to |G|".into()));
    }
    for &s in &part.sizes {
        if h.order % s != 0 {
            return Err(Error::Internal("class size does not divide |G|".into()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{Ring, RingFamily};

    fn handle(p: u64, level: u32, kind: GroupKind) -> GroupHandle {
        let ring = Ring::new(RingFamily::Mixed, p, 1, level, kind == GroupKind::Gu2).unwrap();
        GroupHandle::enumerate(ring, kind, 1 << 24).unwrap()
    }

    #[test]
    fn gl2_f3_partition() {
        let h = handle(3, 1, GroupKind::Gl2);
        let part = conjugacy_partition(&h);
        assert_eq!(part.num_classes(), 8);
        partition_sanity(&h, &part).unwrap();
        // identity class has size 1 and is the class of the identity
        let idc = part.class_of[h.identity_index() as usize];
        assert_eq!(part.sizes[idc as usize], 1);
    }

    #[test]
    fn gl2_o2_class_sizes_sum() {
        let h = handle(3, 2, GroupKind::Gl2);
        let part = conjugacy_partition(&h);
        assert_eq!(part.sizes.iter().sum::<u64>(), 3888);
        partition_sanity(&h, &part).unwrap();
    }

    #[test]
    fn census_matches_formula_gl2() {
        for (p, level) in [(3u64, 1u32), (3, 2), (5, 1)] {
            let h = handle(p, level, GroupKind::Gl2);
            let part = conjugacy_partition(&h);
            let oracle = RealityOracle::new(&h, &part);
            let (census, _) = real_class_census(&h, &part, &oracle).unwrap();
            let formula = formula_report(GroupKind::Gl2, p, level);
            for c in census_claims(&census, &formula) {
                assert!(c.pass(), "{}: expected {} got {}", c.id, c.expected, c.computed);
            }
        }
    }

    #[test]
    fn formula_examples() {
        assert_eq!(formula_report(GroupKind::Gl2, 3, 1).real, 6);
        assert_eq!(formula_report(GroupKind::Gl2, 5, 2).real, 38);
        assert_eq!(formula_report(GroupKind::Gl2, 3, 2).real, 18);
        let gu = formula_report(GroupKind::Gu2, 3, 2);
        assert_eq!(gu.real, 18);
        assert_eq!(gu.strongly_real, 10);
        let t = gu.table1.unwrap();
        assert_eq!(t[1].regular, 0); // (q-3) q^(l-1) / 2 at q = 3
        assert_eq!(t[4], Table1Row { regular: 6, non_regular: 2, strongly_real: 0 });
    }

    #[test]
    fn formula_regression_symbolic() {
        // internal consistency across the symbolic range
        for q in [3u64, 5, 7, 9] {
            for level in 1..=4u32 {
                for kind in [GroupKind::Gl2, GroupKind::Gu2] {
                    let f = formula_report(kind, q, level);
                    assert_eq!(f.real, f.real_regular + f.real_non_regular);
                    assert!(f.strongly_real <= f.real);
                    if let Some(t) = &f.table1 {
                        let reg: u64 = t.iter().map(|r| r.regular).sum();
                        let nreg: u64 = t.iter().map(|r| r.non_regular).sum();
                        let sr: u64 = t.iter().map(|r| r.strongly_real).sum();
                        assert_eq!(reg, f.real_regular);
                        assert_eq!(nreg, f.real_non_regular);
                        assert_eq!(sr, f.strongly_real);
                    }
                }
            }
        }
        // spot values
        assert_eq!(formula_report(GroupKind::Gl2, 9, 4).real, 1 + 6561 + 2 * (1 + 9 + 81 + 729));
        assert_eq!(formula_report(GroupKind::Gu2, 7, 3).strongly_real, 344);
    }

    #[test]
    fn equal_char_census_matches_mixed() {
        // the counts depend only on (q, l), not on the ring family
        let r = Ring::new(RingFamily::Equal, 3, 1, 2, false).unwrap();
        let h = GroupHandle::enumerate(r, GroupKind::Gl2, 1 << 24).unwrap();
        let part = conjugacy_partition(&h);
        let oracle = RealityOracle::new(&h, &part);
        let (census, _) = real_class_census(&h, &part, &oracle).unwrap();
        assert_eq!(census.classes, Some(78));
        assert_eq!(census.real, 18);
        assert_eq!(census.strongly_real, 18);
    }

    #[test]
    fn reality_constant_on_classes() {
        let h = handle(3, 1, GroupKind::Gu2);
        let part = conjugacy_partition(&h);
        let oracle = RealityOracle::new(&h, &part);
        for (idx, g) in h.elements().iter().enumerate() {
            let c = part.class_of[idx];
            let (real, _) = oracle.is_real(g);
            assert_eq!(real, oracle.is_real_class(c));
        }
    }
}
