//! Browser bindings for the demo page in `www/`.
//!
//! Intervals of the powerset of `n` atoms are written as cube faces: one
//! character per atom, `1` (in both ends), `0` (in neither) or `*` (free).
//! `"1*0"` is the interval `[{0}, {0,1}]`.

use serde_json::json;
use wasm_bindgen::prelude::*;

use cubal::boolean::BoolAlg;
use cubal::counting::free_algebra_size;
use cubal::cubic::Interval;
use cubal::free::{format_label, FreeInstance, MAX_BUILD_K, MAX_ENUMERATE_K};

/// Largest cube the interval calculator accepts.
pub const MAX_FACE_ATOMS: usize = 16;

pub fn parse_face(alg: &BoolAlg, face: &str) -> Result<Interval, String> {
    let face = face.trim();
    let n = alg.atom_count();
    if face.chars().count() != n {
        return Err(format!("`{face}` needs exactly {n} characters"));
    }
    let (mut lo, mut hi) = (0u64, 0u64);
    for (i, c) in face.chars().enumerate() {
        match c {
            '1' => {
                lo |= 1 << i;
                hi |= 1 << i;
            }
            '*' => hi |= 1 << i,
            '0' => {}
            _ => return Err(format!("`{c}` is not one of 0, 1, *")),
        }
    }
    Interval::new(alg.element_from_bits(lo), alg.element_from_bits(hi)).map_err(|e| e.to_string())
}

pub fn format_face(x: &Interval) -> String {
    let n = x.lo().parent_atom_count();
    let (lo, hi) = (x.lo().atoms(), x.hi().atoms());
    (0..n)
        .map(|i| match (lo.contains(i), hi.contains(i)) {
            (true, _) => '1',
            (false, true) => '*',
            _ => '0',
        })
        .collect()
}

/// Join, Δ, implication and ≼ for two faces of the same cube, as JSON.
pub fn interval_ops_json(x: &str, y: &str) -> Result<String, String> {
    let n = x.trim().chars().count();
    if n == 0 || n > MAX_FACE_ATOMS {
        return Err(format!("use between 1 and {MAX_FACE_ATOMS} atoms"));
    }
    let alg = BoolAlg::powerset(n);
    let a = parse_face(&alg, x)?;
    let b = parse_face(&alg, y)?;
    let err = |e: cubal::Error| e.to_string();
    let delta = |p: &Interval, q: &Interval| p.delta(q).ok().map(|d| format_face(&d));
    let meet = a.meet(&b).map_err(err)?;
    Ok(json!({
        "atoms": n,
        "x": format_face(&a),
        "y": format_face(&b),
        "join": format_face(&a.join(&b)),
        "meet": meet.as_ref().map(format_face),
        "delta_xy": delta(&a, &b),
        "delta_yx": delta(&b, &a),
        "implication": format_face(&a.implication(&b).map_err(err)?),
        "x_preceq_y": a.preceq(&b).map_err(err)?,
        "y_preceq_x": b.preceq(&a).map_err(err)?,
    })
    .to_string())
}

/// Decimal size of the free algebra on `m` generators.
pub fn free_size_string(m: usize) -> Result<String, String> {
    free_algebra_size(m)
        .map(|n| n.to_string())
        .map_err(|e| e.to_string())
}

/// Atoms, generator images and, for small `k`, `|L(X)|` of `B_k`.
pub fn build_summary_json(k: usize) -> Result<String, String> {
    if k > MAX_BUILD_K {
        return Err(format!("k must be at most {MAX_BUILD_K}"));
    }
    let b = FreeInstance::build(k).map_err(|e| e.to_string())?;
    let lx = if k <= MAX_ENUMERATE_K {
        Some(b.lx_packed().map_err(|e| e.to_string())?.len())
    } else {
        None
    };
    let alg = b.alg();
    let labels: Vec<String> = alg
        .atom_labels()
        .iter()
        .map(|&l| format_label(alg.generator_names(), l))
        .collect();
    let generators: Vec<_> = b
        .generator_intervals()
        .iter()
        .enumerate()
        .map(|(i, g)| json!({ "name": format!("a{i}"), "face": format_face(g) }))
        .collect();
    Ok(json!({
        "k": k,
        "atoms": alg.atom_count(),
        "atom_labels": labels,
        "generators": generators,
        "lx_size": lx,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn free_size(m: usize) -> Result<String, JsValue> {
    free_size_string(m).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn build_summary(k: usize) -> Result<String, JsValue> {
    build_summary_json(k).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn interval_ops(x: &str, y: &str) -> Result<String, JsValue> {
    interval_ops_json(x, y).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn faces_round_trip() {
        let alg = BoolAlg::powerset(3);
        for f in ["1*0", "***", "000", "0*1"] {
            assert_eq!(format_face(&parse_face(&alg, f).unwrap()), f);
        }
        assert!(parse_face(&alg, "1*").is_err());
        assert!(parse_face(&alg, "1x0").is_err());
    }

    #[test]
    fn ops_on_a_square() {
        let v: serde_json::Value =
            serde_json::from_str(&interval_ops_json("1*", "11").unwrap()).unwrap();
        assert_eq!(v["join"], "1*");
        assert_eq!(v["delta_xy"], "10");
        assert_eq!(v["delta_yx"], serde_json::Value::Null);
        assert_eq!(v["meet"], "11");
        let v: serde_json::Value =
            serde_json::from_str(&interval_ops_json("00", "11").unwrap()).unwrap();
        assert_eq!(v["join"], "**");
        assert_eq!(v["meet"], serde_json::Value::Null);
        assert!(interval_ops_json("", "").is_err());
    }

    #[test]
    fn sizes_and_summaries() {
        assert_eq!(free_size_string(2).unwrap(), "45");
        assert!(free_size_string(0).is_err());
        let v: serde_json::Value = serde_json::from_str(&build_summary_json(1).unwrap()).unwrap();
        assert_eq!(v["atoms"], 4);
        assert_eq!(v["lx_size"], 45);
        assert_eq!(v["generators"].as_array().unwrap().len(), 2);
        let v: serde_json::Value = serde_json::from_str(&build_summary_json(4).unwrap()).unwrap();
        assert_eq!(v["atoms"], 121);
        assert!(v["lx_size"].is_null());
        assert!(build_summary_json(8).is_err());
    }
}
