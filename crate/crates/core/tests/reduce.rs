use std::collections::BTreeMap;

use obf_core::cli::generate::{grow_sphere, GrowConfig};
use obf_core::foliation::standard::{degenerate_bc_pair, split_sphere};
use obf_core::foliation::{census, FoliatedSurface, PunctureOnF};
use obf_core::moves::{Move, MoveKind};
use obf_core::movie::compile_movie;
use obf_core::movie::standard::rigid_sphere_movie;
use obf_core::reduce::*;
use obf_core::Rational;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn coefficient(c: i64) -> BTreeMap<String, Rational> {
    BTreeMap::from([("C1".to_string(), Rational::integer(c))])
}

fn split_input(f: FoliatedSurface) -> ReductionInput {
    ReductionInput {
        fdtc: f.fdtc(),
        foliation: f,
        mode: Mode::Split,
    }
}

#[test]
fn split_sphere_is_already_reduced() {
    let input = ReductionInput {
        foliation: split_sphere(),
        fdtc: coefficient(2),
        mode: Mode::Split,
    };
    let trace = reduce_split(&input).unwrap();
    assert!(trace.steps.is_empty());
    assert_eq!(trace.outcome, Outcome::ReducedToSplit);
}

#[test]
fn four_tile_sphere_takes_two_exchanges() {
    let cfg = GrowConfig {
        tiles: 4,
        changes_per_step: 0,
        coefficient: Rational::integer(2),
        punctures: 0,
    };
    let f = grow_sphere(3, &cfg).unwrap().surface;
    assert_eq!((f.regions.len(), f.elliptics.len()), (4, 6));
    let input = split_input(f);
    let trace = reduce_split(&input).unwrap();
    assert_eq!(trace.outcome, Outcome::ReducedToSplit);
    let exchanges = trace
        .steps
        .iter()
        .filter(|s| s.kind == MoveKind::Exchange)
        .count();
    assert_eq!(exchanges, 2);
    let counts: Vec<u32> = trace
        .steps
        .iter()
        .map(|s| s.post_census.elliptics.total())
        .collect();
    assert_eq!(counts.last(), Some(&2));
    assert!(audit(&input, &trace).unwrap().matches);
}

#[test]
fn grown_spheres_reduce_and_replay() {
    let cfg = GrowConfig {
        tiles: 12,
        ..Default::default()
    };
    for seed in 0..15 {
        let input = split_input(grow_sphere(seed, &cfg).unwrap().surface);
        let trace = reduce_split(&input).unwrap();
        assert_eq!(trace.outcome, Outcome::ReducedToSplit, "seed {seed}");
        let c = census(&trace.result);
        assert_eq!((c.elliptics.total(), c.hyperbolics.total()), (2, 0));
        let report = audit(&input, &trace).unwrap();
        assert!(report.matches, "seed {seed}");
        assert_eq!(report.final_hash, surface_hash(&trace.result));
    }
}

#[test]
fn tampered_trace_fails_audit() {
    let input = split_input(grow_sphere(7, &GrowConfig::default()).unwrap().surface);
    let mut trace = reduce_split(&input).unwrap();
    trace.steps.pop();
    let replay = audit(&input, &trace);
    assert!(replay.map_or(true, |r| !r.matches));
}

#[test]
fn rigid_sphere_is_obstructed() {
    let f = compile_movie(&rigid_sphere_movie()).unwrap();
    let bindings: BTreeMap<String, Rational> = f
        .elliptics
        .iter()
        .map(|e| (e.binding.clone(), Rational::integer(0)))
        .collect();
    let input = ReductionInput {
        foliation: f,
        fdtc: bindings,
        mode: Mode::Split,
    };
    let trace = reduce_split(&input).unwrap();
    assert!(trace.steps.is_empty());
    let Outcome::Obstruction(ob) = trace.outcome else {
        panic!("rigid sphere reduced")
    };
    assert!(ob.violations.iter().any(|v| v.condition == "hypothesis(2)"));
    assert!(ob
        .violations
        .iter()
        .any(|v| v.reason.contains("non-separating")));
    assert_eq!(ob.blocked.len(), 4);
    assert!(ob
        .blocked
        .iter()
        .all(|b| b.reason.contains("strongly essential")));
    assert!(ob.estimates.iter().all(|e| e.holds));
}

#[test]
fn degenerate_annulus_contradicts_the_coefficient() {
    let input = ReductionInput {
        foliation: degenerate_bc_pair("C1", "C1"),
        fdtc: coefficient(2),
        mode: Mode::Split,
    };
    let Outcome::Obstruction(ob) = reduce_split(&input).unwrap().outcome else {
        panic!("reduced")
    };
    assert!(ob.annulus.unwrap().contradiction);
}

fn pierce(mut f: FoliatedSurface, seed: u64) -> FoliatedSurface {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids: Vec<u32> = f.regions.iter().map(|r| r.id).collect();
    f.punctures = (1..=2)
        .map(|id| PunctureOnF {
            id,
            region: ids.choose(&mut rng).copied(),
        })
        .collect();
    f
}

#[test]
fn decomposing_spheres_reduce_around_punctures() {
    let cfg = GrowConfig {
        tiles: 10,
        ..Default::default()
    };
    let mut relocations = 0;
    for seed in 0..15 {
        let f = pierce(grow_sphere(seed, &cfg).unwrap().surface, seed);
        let input = ReductionInput {
            fdtc: f.fdtc(),
            foliation: f,
            mode: Mode::Composite,
        };
        let trace = reduce_composite(&input).unwrap();
        assert_eq!(trace.outcome, Outcome::ReducedToComposite, "seed {seed}");
        assert!(trace.result.punctures.iter().all(|p| p.region.is_none()));
        relocations += trace
            .steps
            .iter()
            .filter(|s| s.kind == MoveKind::RelocatePuncture)
            .count();
        assert!(audit(&input, &trace).unwrap().matches);
    }
    assert!(relocations > 0);
}

#[test]
fn pierced_annuli_cap_and_flatten() {
    let mut f = degenerate_bc_pair("C1", "C2");
    f.punctures = vec![
        PunctureOnF {
            id: 1,
            region: Some(1),
        },
        PunctureOnF {
            id: 2,
            region: Some(2),
        },
    ];
    let fdtc = BTreeMap::from([
        ("C1".to_string(), Rational::integer(2)),
        ("C2".to_string(), Rational::integer(-3)),
    ]);
    let input = ReductionInput {
        foliation: f,
        fdtc,
        mode: Mode::Composite,
    };
    let trace = reduce_composite(&input).unwrap();
    assert_eq!(trace.outcome, Outcome::ReducedToComposite);
    assert_eq!(trace.steps.len(), 1);
    assert_eq!(
        trace.steps[0].parameters,
        Move::CapAndFlatten { regions: [1, 2] }
    );
}

#[test]
fn mode_must_match_punctures() {
    let input = ReductionInput {
        foliation: split_sphere(),
        fdtc: coefficient(2),
        mode: Mode::Composite,
    };
    assert!(reduce_composite(&input).is_err());
    assert!(reduce_split(&input).is_err());
}
