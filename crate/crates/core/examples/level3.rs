use glu2::matgroups::GroupKind;
use glu2::verify::Workspace;

fn main() {
    let t0 = std::time::Instant::now();
    let mut ws = Workspace::new(1 << 26, 0x5EED);
    {
        let b = ws.bundle(GroupKind::Gl2, 3, 3).unwrap();
        println!("[{:?}] GL2(o_3): order {} classes {} real {} sr {}",
            t0.elapsed(), b.handle.order, b.partition.num_classes(), b.census.real, b.census.strongly_real);
    }
    let (_, pack) = ws.bundle_and_pack(GroupKind::Gl2, 3, 3).unwrap();
    println!("[{:?}] chartab: k {} modulus {} exponent {}", t0.elapsed(), pack.table.k, pack.table.modulus, pack.table.exponent);
    let real_chars = pack.table.real_valued.iter().filter(|&&b| b).count();
    let sd = glu2::chartab::self_dual_census(&pack.table);
    println!("real chars {} a {} b {}", real_chars, sd.orthogonal_dim_sum, sd.symplectic_dim_sum);
    let tang = pack.tangibility.as_ref().unwrap();
    println!("[{:?}] tangible (ss, sns, cus) = ({}, {}, {}), nonreg self-dual {}, violations {}",
        t0.elapsed(), tang.m_ss, tang.m_sns, tang.m_cus, tang.non_regular_self_dual, tang.equivalence_violations.len());
}
