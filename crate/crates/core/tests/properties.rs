use std::collections::BTreeSet;

use buchidet::det::explore::macrostates;
use buchidet::det::{DetContext, Macrostate, RankedSlice};
use buchidet::gen::{random, random_dpa, RandomSpec};
use buchidet::oracle::enumerate_lassos;
use buchidet::trie::{decode_sequence, encode_sequence};
use buchidet::{
    build_powerset_structure, compute_direct_simulation, determinize_plain, dpa_accepts_lasso, dpa_equivalent,
    emit_dpa, emit_nba, minimize_mealy, minimize_priorities, nba_accepts_lasso, parse_dpa, parse_nba, postprocess,
    DetConfig, Limits, MergeStrategy, Nba, StateSet,
};
use proptest::prelude::*;

const OPTS: [&str; 8] = ["def", "E", "I", "EI", "S", "EIS", "W", "EISWD"];

fn small_nba() -> impl Strategy<Value = Nba> {
    (1usize..6, 1usize..3, any::<u64>()).prop_map(|(states, letters, seed)| {
        random(&RandomSpec::new(states, letters, 1.5, 0.3), seed)
    })
}

fn merge() -> impl Strategy<Value = MergeStrategy> {
    prop::sample::select(MergeStrategy::ALL.to_vec())
}

/// A slice over `n` states: each state goes to one of up to `k` sets or
/// stays out; ranks are a permutation.
fn slice() -> impl Strategy<Value = (RankedSlice, usize)> {
    (1usize..10, 1usize..6)
        .prop_flat_map(|(n, k)| (Just(n), prop::collection::vec(0..=k, n), Just((1..=k as u32).collect::<Vec<u32>>()).prop_shuffle()))
        .prop_map(|(n, owner, ranks)| {
            let mut sets = Vec::new();
            let mut rs = Vec::new();
            for (i, r) in ranks.iter().enumerate() {
                let s = StateSet::from_iter_in(n, (0..n).filter(|q| owner[*q] == i + 1));
                if !s.is_empty() {
                    sets.push(s);
                    rs.push(*r);
                }
            }
            (RankedSlice::from_parts(sets, rs), n)
        })
}

fn normalized(slice: &RankedSlice, n: usize) -> RankedSlice {
    let mut ms = Macrostate::empty(n, 1);
    ms.comps[0] = slice.clone();
    ms.normalize();
    ms.comps.remove(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stateset_matches_btreeset(a in prop::collection::btree_set(0usize..150, 0..40), b in prop::collection::btree_set(0usize..150, 0..40)) {
        let (x, y) = (StateSet::from_iter_in(150, a.iter().copied()), StateSet::from_iter_in(150, b.iter().copied()));
        let collect = |s: &StateSet| s.iter().collect::<BTreeSet<_>>();
        prop_assert_eq!(collect(&x.union(&y)), a.union(&b).copied().collect::<BTreeSet<_>>());
        prop_assert_eq!(collect(&x.intersection(&y)), a.intersection(&b).copied().collect::<BTreeSet<_>>());
        prop_assert_eq!(collect(&x.difference(&y)), a.difference(&b).copied().collect::<BTreeSet<_>>());
        prop_assert_eq!(x.is_subset(&y), a.is_subset(&b));
        prop_assert_eq!(x.intersects(&y), !a.is_disjoint(&b));
        prop_assert_eq!(x.len(), a.len());
        prop_assert_eq!(StateSet::min(&x), a.first().copied());
    }

    #[test]
    fn sequence_encoding_round_trips((s, n) in slice()) {
        let seq = encode_sequence(&s, n);
        prop_assert_eq!(decode_sequence(&seq).unwrap(), normalized(&s, n));
    }

    #[test]
    fn normalize_is_idempotent_and_order_preserving((s, n) in slice()) {
        let once = normalized(&s, n);
        prop_assert_eq!(&normalized(&once, n), &once);
        for i in 0..s.len() {
            for j in 0..s.len() {
                prop_assert_eq!(s.ranks[i] < s.ranks[j], once.ranks[i] < once.ranks[j]);
            }
        }
    }

    #[test]
    fn explored_macrostates_are_well_formed(nba in small_nba(), m in merge(), opt in prop::sample::select(OPTS.to_vec())) {
        let cfg = DetConfig::from_opts(opt, m).unwrap();
        let ctx = DetContext::new(&nba, &cfg);
        let det = determinize_plain(&nba, &cfg, &Limits::default()).unwrap();
        for ms in macrostates(&det.explored).into_iter().flatten() {
            prop_assert!(ctx.check(ms).is_ok(), "{}: {:?}", ms, ctx.check(ms));
        }
    }

    #[test]
    fn nba_hoa_round_trip(nba in small_nba()) {
        let back = parse_nba(&emit_nba(&nba)).unwrap();
        prop_assert_eq!(back.num_states(), nba.num_states());
        prop_assert_eq!(back.initial(), nba.initial());
        prop_assert_eq!(back.accepting(), nba.accepting());
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), nba.edges().collect::<Vec<_>>());
    }

    #[test]
    fn dpa_hoa_round_trip(states in 1usize..8, aps in 0usize..3, seed in any::<u64>()) {
        let d = random_dpa(states, aps, 0, 5, seed);
        let back = parse_dpa(&emit_dpa(&d)).unwrap();
        prop_assert_eq!(back.num_states(), d.num_states());
        prop_assert_eq!(dpa_equivalent(&d, &back).unwrap(), Ok(()));
        prop_assert_eq!(emit_dpa(&back), emit_dpa(&d));
    }

    #[test]
    fn simulation_implies_inclusion(nba in small_nba()) {
        let sim = compute_direct_simulation(&nba);
        let n = nba.num_states();
        let lassos = enumerate_lassos(nba.num_symbols(), 2, 3);
        for (p, q) in sim.pairs() {
            let (np, nq) = (nba.with_initial(&StateSet::singleton(n, p)), nba.with_initial(&StateSet::singleton(n, q)));
            for l in &lassos {
                prop_assert!(!nba_accepts_lasso(&np, l) || nba_accepts_lasso(&nq, l), "({p},{q}) on {l}");
            }
        }
    }

    #[test]
    fn powerset_successors_are_posts(nba in small_nba()) {
        let ps = build_powerset_structure(&nba);
        prop_assert_eq!(ps.node_of(nba.initial()), Some(ps.initial));
        for v in 0..ps.len() {
            for a in 0..nba.num_symbols() {
                prop_assert_eq!(ps.node_of(&nba.post(&ps.nodes[v], a)), Some(ps.succ(v, a)));
            }
        }
    }

    #[test]
    fn oracle_self_checks(states in 1usize..7, seed in any::<u64>()) {
        let d = random_dpa(states, 1, 0, 4, seed);
        prop_assert_eq!(dpa_equivalent(&d, &d).unwrap(), Ok(()));
        let co = d.complement();
        let w = dpa_equivalent(&d, &co).unwrap().expect_err("a DPA differs from its complement");
        prop_assert_ne!(dpa_accepts_lasso(&d, &w), dpa_accepts_lasso(&co, &w));
        for l in enumerate_lassos(2, 2, 2) {
            prop_assert_ne!(dpa_accepts_lasso(&d, &l), dpa_accepts_lasso(&co, &l));
        }
    }

    #[test]
    fn postprocessing_preserves_language(states in 1usize..9, seed in any::<u64>()) {
        let d = random_dpa(states, 1, 0, 5, seed);
        let p = postprocess(&d);
        prop_assert!(p.num_states() <= d.num_states());
        prop_assert_eq!(dpa_equivalent(&d, &p).unwrap(), Ok(()));
        let m = minimize_priorities(&d);
        prop_assert_eq!(&minimize_priorities(&m), &m);
        prop_assert_eq!(minimize_mealy(&m).num_states(), minimize_mealy(&minimize_mealy(&m)).num_states());
    }
}
