//! On-disk caches: a packed binary group table and a JSON character
//! table. Integrity of the group table is an order check plus first and
//! last element checksums; a corrupt file is reported as [`Error::Cache`]
//! so callers can rebuild.

use crate::matgroups::{GroupHandle, GroupKind, Mat2};
use crate::rings::{Ring, RingFamily};
use crate::{Error, Result};
use std::io::{Read, Write};
use std::path::Path;

const MAGIC: &[u8; 8] = b"GLU2GRP1";

fn put_u64(buf: &mut Vec<u8>, v: u64) {
    buf.extend_from_slice(&v.to_le_bytes());
}

fn get_u64(data: &[u8], pos: &mut usize) -> Result<u64> {
    let end = *pos + 8;
    if end > data.len() {
        return Err(Error::Cache("truncated group cache".into()));
    }
    let v = u64::from_le_bytes(data[*pos..end].try_into().unwrap());
    *pos = end;
    Ok(v)
}

/// Serialize a group handle: header (descriptor, kind, order, version),
/// first/last element checksums, then packed element codes in canonical
/// order.
pub fn save_group(path: &Path, handle: &GroupHandle) -> Result<()> {
    let r = &handle.ring;
    let mut buf = Vec::with_capacity(16 + handle.elements().len() * 32);
    buf.extend_from_slice(MAGIC);
    buf.push(match r.family {
        RingFamily::Mixed => 0,
        RingFamily::Equal => 1,
    });
    buf.push(u8::from(r.extended));
    buf.push(match handle.kind {
        GroupKind::Gl2 => 0,
        GroupKind::Gu2 => 1,
    });
    buf.push(0); // reserved
    put_u64(&mut buf, r.p);
    put_u64(&mut buf, r.f as u64);
    put_u64(&mut buf, r.level as u64);
    put_u64(&mut buf, r.eps_sq_base_code());
    put_u64(&mut buf, handle.order);
    let first = handle.elements().first().unwrap().codes();
    let last = handle.elements().last().unwrap().codes();
    for c in first.iter().chain(last.iter()) {
        put_u64(&mut buf, *c);
    }
    for m in handle.elements() {
        for c in m.codes() {
            put_u64(&mut buf, c);
        }
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(&buf)?;
    Ok(())
}

/// Load and validate a group cache for the given descriptor. Any
/// mismatch (descriptor, order, checksums, membership count) is a
/// cache error.
pub fn load_group(path: &Path, ring: &Ring, kind: GroupKind) -> Result<GroupHandle> {
    let mut data = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut data)?;
    if data.len() < 8 || &data[0..8] != MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    let fam = data[8];
    let ext = data[9];
    let knd = data[10];
    let want_fam = match ring.family {
        RingFamily::Mixed => 0,
        RingFamily::Equal => 1,
    };
    let want_kind = match kind {
        GroupKind::Gl2 => 0,
        GroupKind::Gu2 => 1,
    };
    if fam != want_fam || ext != u8::from(ring.extended) || knd != want_kind {
        return Err(Error::Cache("descriptor mismatch".into()));
    }
    let mut pos = 12;
    let p = get_u64(&data, &mut pos)?;
    let f = get_u64(&data, &mut pos)?;
    let level = get_u64(&data, &mut pos)?;
    let eps_sq = get_u64(&data, &mut pos)?;
    if p != ring.p || f != ring.f as u64 || level != ring.level as u64 {
        return Err(Error::Cache("descriptor mismatch".into()));
    }
    if eps_sq != ring.eps_sq_base_code() {
        return Err(Error::Cache("nonsquare unit mismatch".into()));
    }
    let order = get_u64(&data, &mut pos)?;
    let mut first = [0u64; 4];
    let mut last = [0u64; 4];
    for c in first.iter_mut() {
        *c = get_u64(&data, &mut pos)?;
    }
    for c in last.iter_mut() {
        *c = get_u64(&data, &mut pos)?;
    }
    let expected = crate::matgroups::order_formula(kind, ring.q, ring.level);
    if order as u128 != expected {
        return Err(Error::Cache("order does not match the closed formula".into()));
    }
    let mut elements = Vec::with_capacity(order as usize);
    for _ in 0..order {
        let mut codes = [0u64; 4];
        for c in codes.iter_mut() {
            *c = get_u64(&data, &mut pos)?;
            if *c >= ring.size() {
                return Err(Error::Cache("element code out of range".into()));
            }
        }
        elements.push(Mat2::from_codes(ring, codes));
    }
    if pos != data.len() {
        return Err(Error::Cache("trailing bytes".into()));
    }
    if elements.first().map(|m| m.codes()) != Some(first)
        || elements.last().map(|m| m.codes()) != Some(last)
    {
        return Err(Error::Cache("element checksum mismatch".into()));
    }
    let handle = GroupHandle::from_elements(ring.clone(), kind, elements)?;
    if handle.order != order {
        return Err(Error::Cache("duplicate elements in cache".into()));
    }
    Ok(handle)
}

/// Character-table cache: modulus, class-ordering reference (the
/// representative codes, validating against the partition on load),
/// residues, degrees, indicators and flags, as JSON.
#[derive(serde::Serialize, serde::Deserialize)]
pub struct CharTableCache {
    pub version: u32,
    pub kind: GroupKind,
    pub family: RingFamily,
    pub p: u64,
    pub f: u32,
    pub level: u32,
    pub seed: u64,
    pub class_reps: Vec<[u64; 4]>,
    pub table: crate::chartab::CharTable,
}

pub fn save_chartab(path: &Path, cache: &CharTableCache) -> Result<()> {
    let body = serde_json::to_vec(cache).map_err(|e| Error::Cache(e.to_string()))?;
    std::fs::write(path, body)?;
    Ok(())
}

pub fn load_chartab(
    path: &Path,
    ring: &Ring,
    kind: GroupKind,
    seed: u64,
    expected_reps: &[[u64; 4]],
) -> Result<crate::chartab::CharTable> {
    let body = std::fs::read(path)?;
    let cache: CharTableCache =
        serde_json::from_slice(&body).map_err(|e| Error::Cache(e.to_string()))?;
    if cache.version != 1
        || cache.kind != kind
        || cache.family != ring.family
        || cache.p != ring.p
        || cache.f != ring.f
        || cache.level != ring.level
        || cache.seed != seed
    {
        return Err(Error::Cache("character table descriptor mismatch".into()));
    }
    if cache.class_reps != expected_reps {
        return Err(Error::Cache(
            "character table class ordering does not match the partition".into(),
        ));
    }
    if cache.table.k != expected_reps.len()
        || cache.table.values.len() != cache.table.k * cache.table.k
        || cache.table.fs.len() != cache.table.k
    {
        return Err(Error::Cache("character table shape mismatch".into()));
    }
    Ok(cache.table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_cache_roundtrip_and_corruption() {
        let dir = std::env::temp_dir().join("glu2-cache-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("gu2_p3_l1.grp");
        let ring = Ring::new(RingFamily::Mixed, 3, 1, 1, true).unwrap();
        let h = GroupHandle::enumerate(ring.clone(), GroupKind::Gu2, 1 << 20).unwrap();
        save_group(&path, &h).unwrap();
        let loaded = load_group(&path, &ring, GroupKind::Gu2).unwrap();
        assert_eq!(loaded.order, h.order);
        assert_eq!(loaded.elements(), h.elements());

        // flip a byte in the body: must be rejected
        let mut bytes = std::fs::read(&path).unwrap();
        let n = bytes.len();
        bytes[n - 3] ^= 0xff;
        std::fs::write(&path, &bytes).unwrap();
        assert!(load_group(&path, &ring, GroupKind::Gu2).is_err());
        std::fs::remove_file(&path).ok();
    }
}
