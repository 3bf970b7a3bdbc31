mod common;

use std::collections::{BTreeMap, HashSet};

use blowup::algebra::to_charts;
use blowup::scenarios::{catalog_get, list, parse_uri, tree_count, CatalogEntry, Quantity};
use blowup::Error;
use common::*;

/// Plane tree as cyclically ordered adjacency lists, from a Dyck word.
fn tree_from_dyck(word: &[bool]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new()];
    let mut stack = vec![0];
    for &up in word {
        if up {
            let parent = *stack.last().unwrap();
            let v = adj.len();
            adj.push(vec![parent]);
            adj[parent].push(v);
            stack.push(v);
        } else {
            stack.pop();
        }
    }
    adj
}

fn encode(adj: &[Vec<usize>], u: usize, from: usize, out: &mut Vec<bool>) {
    let n = &adj[u];
    let k = n.iter().position(|&w| w == from).unwrap();
    for i in 1..n.len() {
        let w = n[(k + i) % n.len()];
        out.push(true);
        encode(adj, w, u, out);
        out.push(false);
    }
}

/// Smallest encoding over every corner, which identifies the tree up to rotation.
fn canonical(adj: &[Vec<usize>]) -> Vec<bool> {
    let mut best: Option<Vec<bool>> = None;
    for v in 0..adj.len() {
        for k in 0..adj[v].len() {
            let mut out = Vec::new();
            for i in 0..adj[v].len() {
                let w = adj[v][(k + i) % adj[v].len()];
                out.push(true);
                encode(adj, w, v, &mut out);
                out.push(false);
            }
            if best.as_ref().is_none_or(|b| out < *b) {
                best = Some(out);
            }
        }
    }
    best.unwrap_or_default()
}

fn dyck_words(pairs: usize) -> Vec<Vec<bool>> {
    fn go(open: usize, close: usize, cur: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if open == 0 && close == 0 {
            out.push(cur.clone());
            return;
        }
        if open > 0 {
            cur.push(true);
            go(open - 1, close + 1, cur, out);
            cur.pop();
        }
        if close > 0 {
            cur.push(false);
            go(open, close - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(pairs, 0, &mut Vec::new(), &mut out);
    out
}

#[test]
fn tree_counts_match_brute_force_enumeration() {
    // m vertices, m - 1 edges
    for m in 2..=11u32 {
        let distinct: HashSet<Vec<bool>> = dyck_words(m as usize - 1).iter().map(|w| canonical(&tree_from_dyck(w))).collect();
        assert_eq!(tree_count(m).unwrap(), distinct.len() as u128, "m={m}");
    }
}

#[test]
fn tree_count_range() {
    assert!(matches!(tree_count(1), Err(Error::OutOfRange(_))));
    assert!(matches!(tree_count(31), Err(Error::OutOfRange(_))));
    assert!(tree_count(30).unwrap() > tree_count(29).unwrap());
}

#[test]
fn parse_catalog_uris() {
    let (name, p) = parse_uri("catalog:riccati?a=1&e1=1&e2=-1").unwrap();
    assert_eq!(name, "riccati");
    assert_eq!(p, BTreeMap::from([("a".to_string(), 1.0), ("e1".to_string(), 1.0), ("e2".to_string(), -1.0)]));
    let (name, p) = parse_uri("weierstrass").unwrap();
    assert_eq!(name, "weierstrass");
    assert!(p.is_empty());
    assert!(matches!(parse_uri("riccati?a"), Err(Error::Parse(_))));
    assert!(matches!(parse_uri("riccati?a=x"), Err(Error::Parse(_))));
}

#[test]
fn catalog_errors() {
    assert!(matches!(catalog_get("nope", &params(&[])), Err(Error::UnknownName(_))));
    assert!(matches!(catalog_get("riccati", &params(&[("a", 1.0)])), Err(Error::MissingParameter(_))));
    assert!(matches!(catalog_get("riccati", &params(&[("a", 1.0), ("e1", 2.0), ("e2", 2.0)])), Err(Error::ExcludedParameter(_))));
}

#[test]
fn listing_covers_the_representatives() {
    let names: HashSet<&str> = list().iter().map(|i| i.name).collect();
    for e in catalog_representatives() {
        assert!(names.contains(e.name.as_str()), "{}", e.name);
    }
    assert!(list().iter().all(|i| !i.topic.is_empty()));
}

#[test]
fn entries_round_trip_through_json() {
    for e in catalog_representatives() {
        let s = serde_json::to_string(&e).unwrap();
        let back: CatalogEntry = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e, "{}", e.name);
    }
}

#[test]
fn expected_equilibria_are_equilibria() {
    let mut checked = 0;
    for e in catalog_representatives() {
        let sys = to_charts(&e.field()).unwrap();
        for x in &e.expected {
            if let Quantity::Equilibrium { chart, location, eigenvalues, .. } = x.quantity {
                let f = sys.field(chart).eval(location);
                assert!(f[0].norm() + f[1].norm() < 1e-10, "{} {}: {f:?}", e.name, x.label);
                if let Some(l) = eigenvalues {
                    let j = sys.field(chart).jacobian(location);
                    let (tr, det) = (j[0][0] + j[1][1], j[0][0] * j[1][1] - j[0][1] * j[1][0]);
                    assert!((l[0] + l[1] - tr).norm() + (l[0] * l[1] - det).norm() < 1e-9, "{} {}", e.name, x.label);
                }
                checked += 1;
            }
            if let Quantity::Windings { w_t, w_u, cycles, .. } = x.quantity {
                assert!(cycles > 0 && w_t != 0 && w_u != 0, "{}", e.name);
            }
        }
    }
    assert!(checked > 10);
}

#[test]
fn every_representative_classifies() {
    use blowup::equilibria::{find_equilibria, SearchRegion};
    for e in catalog_representatives() {
        let sys = to_charts(&e.field()).unwrap();
        // systems linear in the uz chart carry the finite line x = 0 of equilibria
        let linear_at_infinity = matches!(e.name.as_str(), "jordan_block" | "blowup_node");
        let all = find_equilibria(&sys, SearchRegion::All);
        if linear_at_infinity {
            assert!(matches!(all, Err(Error::DegenerateSystem(_))), "{}", e.name);
            assert!(find_equilibria(&sys, SearchRegion::InfinityOnly).is_ok_and(|v| !v.is_empty()), "{}", e.name);
        } else {
            assert!(all.is_ok_and(|v| !v.is_empty()), "{}", e.name);
        }
    }
}
