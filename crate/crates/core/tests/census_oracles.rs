use std::collections::BTreeSet;
use std::sync::Mutex;

use ramsey_core::canon::canonical_key;
use ramsey_core::census::{
    census, census_levels, cone_census, cone_glue, extensions, ramsey_number, table, CensusConfig, CensusSpec,
    Limits,
};
use ramsey_core::graph::{is_ramsey_st, Graph};
use ramsey_core::{Error, RamseyType};

fn rt(s: usize, t: usize) -> RamseyType {
    RamseyType::new(s, t).unwrap()
}

/// Every labelled graph on `n` vertices, as edge masks over the pairs.
fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
    (0u64..1 << pairs.len()).map(move |m| {
        let mut g = Graph::empty(n);
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if m >> i & 1 == 1 {
                g.add_edge(u, v);
            }
        }
        g
    })
}

fn brute_force_classes(s: usize, t: usize, n: usize) -> BTreeSet<Vec<u8>> {
    all_graphs(n).filter(|g| is_ramsey_st(g, s, t)).map(|g| canonical_key(&g)).collect()
}

#[test]
fn every_six_vertex_graph_has_a_triangle_or_independent_triple() {
    assert!(all_graphs(6).all(|g| !is_ramsey_st(&g, 3, 3)));
    let c = census(&CensusSpec::new(rt(3, 3), 6), &CensusConfig::default()).unwrap();
    assert!(c.is_empty());
}

#[test]
fn census_matches_brute_force_up_to_seven_vertices() {
    let cfg = CensusConfig::default();
    for (s, t) in [(3, 3), (3, 4), (4, 3), (3, 5), (4, 4)] {
        for n in 1..=7 {
            let want = brute_force_classes(s, t, n);
            let got: BTreeSet<Vec<u8>> = census(&CensusSpec::new(rt(s, t), n), &cfg)
                .unwrap()
                .keys()
                .map(<[u8]>::to_vec)
                .collect();
            assert_eq!(got, want, "R({s},{t},{n})");
        }
    }
}

#[test]
fn extensions_agree_with_direct_enumeration() {
    // Extensions of C5 under (3,4): all 6-vertex graphs in R(3,4) whose
    // first five vertices induce C5.
    let g = Graph::cycle(5);
    let got: BTreeSet<Vec<u8>> = extensions(&g, rt(3, 4)).unwrap().iter().map(canonical_key).collect();
    let want: BTreeSet<Vec<u8>> = (0u64..32)
        .map(|x| g.with_vertex(x))
        .filter(|h| is_ramsey_st(h, 3, 4))
        .map(|h| canonical_key(&h))
        .collect();
    assert_eq!(got, want);
}

#[test]
fn published_small_counts() {
    let cfg = CensusConfig::default();
    let rows = table(rt(4, 5), 8, &cfg).unwrap();
    let totals: Vec<u64> = rows.iter().map(|r| r.total).collect();
    assert_eq!(totals, vec![1, 2, 4, 10, 28, 114, 627, 5588]);
    let one = census(&CensusSpec::new(rt(4, 5), 5).edges(Some(8), Some(8)), &cfg).unwrap();
    assert_eq!(one.len(), 1);
}

#[test]
fn small_ramsey_numbers() {
    let cfg = CensusConfig::default();
    for (s, t, r) in [(3, 3, 6), (3, 4, 9), (3, 5, 14)] {
        let found = ramsey_number(rt(s, t), 20, &cfg).unwrap().unwrap();
        assert_eq!(found.value, r);
        assert!(!found.witnesses.is_empty());
        assert_eq!(found.witnesses.order(), r - 1);
    }
    let five = ramsey_number(rt(3, 3), 6, &cfg).unwrap().unwrap();
    assert_eq!(five.witnesses.len(), 1);
    assert!(five.witnesses.contains(&Graph::cycle(5)));
    assert!(ramsey_number(rt(3, 4), 8, &cfg).unwrap().is_none());
}

#[test]
fn cone_gluing_equals_extension_census() {
    let cfg = CensusConfig::default();
    for s in 2..=4 {
        for t in 2..=4 {
            for n in 1..=9 {
                let ext = census(&CensusSpec::new(rt(s, t), n), &cfg).unwrap();
                let cone = cone_census(rt(s, t), n, 0, &cfg).unwrap();
                let a: Vec<&[u8]> = ext.keys().collect();
                let b: Vec<&[u8]> = cone.keys().collect();
                assert_eq!(a, b, "R({s},{t},{n})");
            }
        }
    }
}

#[test]
fn cone_gluing_finds_the_densest_nine_vertex_graph() {
    let cfg = CensusConfig::default();
    let dense = cone_census(rt(4, 5), 9, 27, &cfg).unwrap();
    assert_eq!(dense.len(), 1);
    assert_eq!(dense.counts().keys().copied().collect::<Vec<_>>(), vec![27]);
    let ext = census(&CensusSpec::new(rt(4, 5), 9).edges(Some(27), None), &cfg).unwrap();
    assert_eq!(dense.keys().collect::<Vec<_>>(), ext.keys().collect::<Vec<_>>());
}

#[test]
fn single_cone_gluing_matches_filtered_census() {
    // Members of R(3,4,8) whose vertex 0 has neighbourhood G and
    // non-neighbourhood H, for one choice of G and H.
    let g = Graph::empty(2);
    let h = Graph::cycle(5);
    let out = cone_glue(&g, &h, rt(3, 4), 0).unwrap();
    let mut want = BTreeSet::new();
    // Direct: vertex layout G = {0,1}, apex 2, H = {3..8}; try all G-H edges.
    let base = {
        let mut f = Graph::empty(8);
        f.add_edge(0, 2);
        f.add_edge(1, 2);
        for i in 0..5 {
            f.add_edge(3 + i, 3 + (i + 1) % 5);
        }
        f
    };
    for m in 0u64..(1 << 10) {
        let mut f = base.clone();
        for i in 0..10 {
            if m >> i & 1 == 1 {
                f.add_edge(i / 5, 3 + i % 5);
            }
        }
        if is_ramsey_st(&f, 3, 4) {
            want.insert(canonical_key(&f));
        }
    }
    let got: BTreeSet<Vec<u8>> = out.keys().map(<[u8]>::to_vec).collect();
    assert_eq!(got, want);
}

#[test]
fn worker_count_does_not_change_results() {
    let base = census(&CensusSpec::new(rt(4, 4), 9), &CensusConfig::default()).unwrap();
    for w in [2, 4, 16] {
        let c = census(&CensusSpec::new(rt(4, 4), 9), &CensusConfig::default().workers(w)).unwrap();
        assert_eq!(c, base, "workers {w}");
    }
    let cone1 = cone_census(rt(3, 4), 8, 0, &CensusConfig::default()).unwrap();
    let cone4 = cone_census(rt(3, 4), 8, 0, &CensusConfig::default().workers(4)).unwrap();
    assert_eq!(cone1, cone4);
}

#[test]
fn resume_from_journal() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = CensusConfig::default().checkpoint(dir.path());
    // A tight member limit interrupts the run after the first levels.
    let limited = CensusConfig::default()
        .checkpoint(dir.path())
        .limits(Limits { max_members: Some(400), ..Limits::default() });
    match census(&CensusSpec::new(rt(4, 4), 9), &limited) {
        Err(Error::ResourceLimit { checkpoint, .. }) => assert_eq!(checkpoint.as_deref(), Some(dir.path())),
        other => panic!("expected a resource limit, got {other:?}"),
    }
    let resumed = census(&CensusSpec::new(rt(4, 4), 9), &cfg).unwrap();
    let fresh = census(&CensusSpec::new(rt(4, 4), 9), &CensusConfig::default()).unwrap();
    assert_eq!(resumed.keys().collect::<Vec<_>>(), fresh.keys().collect::<Vec<_>>());
    assert_eq!(resumed.len(), 14701);
}

#[test]
fn progress_events_are_json() {
    let lines = Mutex::new(Vec::new());
    let sink = |e: &ramsey_core::census::ProgressEvent| lines.lock().unwrap().push(serde_json::to_string(e).unwrap());
    let cfg = CensusConfig::default().progress(&sink);
    census_levels(3, 4, 6, &cfg, |_| Ok(())).unwrap();
    let lines = lines.into_inner().unwrap();
    assert!(!lines.is_empty());
    for l in &lines {
        let v: serde_json::Value = serde_json::from_str(l).unwrap();
        assert!(v["event"].is_string());
    }
}

#[test]
fn resumed_table_reports_every_order() {
    let dir = tempfile::tempdir().unwrap();
    let limited = CensusConfig::default()
        .checkpoint(dir.path())
        .limits(Limits { max_members: Some(100), ..Limits::default() });
    assert!(table(rt(3, 5), 13, &limited).is_err());
    let resumed = table(rt(3, 5), 13, &CensusConfig::default().checkpoint(dir.path())).unwrap();
    let fresh = table(rt(3, 5), 13, &CensusConfig::default()).unwrap();
    assert_eq!(resumed, fresh);
}
