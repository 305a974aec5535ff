use symconf::catalog::{audit, spectrum, Reason, RulerDb, SpectrumOptions, Verdict};

fn cyclic_values(k: usize) -> Vec<u64> {
    let row = spectrum(k, &RulerDb::embedded(), SpectrumOptions::default()).unwrap();
    row.verdicts.iter().filter(|e| e.verdict.is_cyclic()).map(|e| e.v).collect()
}

#[test]
fn seven_has_cyclic_tail_from_48() {
    let row = spectrum(7, &RulerDb::embedded(), SpectrumOptions::default()).unwrap();
    assert_eq!(cyclic_values(7), vec![48, 49, 50]);
    assert_eq!((row.v_delta, row.e_c, row.g), (48, 48, 51));
    for v in 43..48 {
        assert!(!row.verdict(v).unwrap().is_cyclic(), "{v}");
    }
}

#[test]
fn ten_has_plane_and_top_block() {
    let got = cyclic_values(10);
    assert_eq!(got.first(), Some(&91));
    for v in 107..=110 {
        assert!(got.contains(&v), "{v}");
    }
    assert!(!got.contains(&92));
}

#[test]
fn six_with_search_refutes_cyclic_34() {
    let row = spectrum(6, &RulerDb::embedded(), SpectrumOptions::with_search()).unwrap();
    match row.verdict(34).unwrap() {
        Verdict::NoCyclic { reasons, noncyclic } => {
            assert!(reasons.contains(&Reason::Search));
            assert!(!noncyclic.is_empty());
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn every_audited_claim_rebuilds() {
    for k in 4..=8 {
        let row = spectrum(k, &RulerDb::embedded(), SpectrumOptions::default()).unwrap();
        for e in &row.verdicts {
            let provs = match &e.verdict {
                Verdict::ExistsCyclic { provenance } | Verdict::Exists { provenance } => provenance,
                _ => continue,
            };
            for p in provs.iter().filter(|p| p.audited) {
                let m = audit(e.v, k, p).unwrap().expect("audited provenance rebuilds");
                let r = m.verify().unwrap();
                assert_eq!((r.v as u64, r.k), (e.v, k), "{p:?}");
            }
        }
    }
}

#[test]
fn json_shape() {
    let row = spectrum(5, &RulerDb::embedded(), SpectrumOptions::default()).unwrap();
    let text = serde_json::to_string(&row).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["k"], 5);
    assert_eq!(json["P"], 21);
    assert_eq!(json["G"], 23);
    assert_eq!(json["filling"], 100);
    let first = &json["verdicts"][0];
    assert_eq!(first["v"], 21);
    assert_eq!(first["status"], "exists_cyclic");
    assert!(first["provenance"].as_array().unwrap().iter().any(|p| p["tag"] == "a"));
    let second = &json["verdicts"][1];
    assert_eq!(second["status"], "no_configuration");
    assert_eq!(second["reason"], "Deficiency1");
}
