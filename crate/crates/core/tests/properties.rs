use proptest::prelude::*;

use obf_core::cli::doc::{foliation_document, DocKind, Document};
use obf_core::cli::generate::{grow_sphere, GrowConfig};
use obf_core::foliation::iso::isomorphic;
use obf_core::foliation::{census, validate, FoliatedSurface};
use obf_core::moves::exchange::exchange_inverse_sites;
use obf_core::moves::{apply_exchange, apply_exchange_inverse, check_exchange};
use obf_core::reduce::{audit, reduce_split, Mode, Outcome, ReductionInput};

fn grown(seed: u64, tiles: usize, changes: usize) -> FoliatedSurface {
    let cfg = GrowConfig {
        tiles,
        changes_per_step: changes,
        ..Default::default()
    };
    grow_sphere(seed, &cfg).unwrap().surface
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn grown_spheres_are_valid_bb_spheres(seed in 0u64..10_000, tiles in 2usize..24, changes in 0usize..4) {
        let f = grown(seed, tiles, changes);
        prop_assert!(validate(&f).is_valid());
        prop_assert!(f.bb_only());
        prop_assert!(f.regions.len() >= tiles);
        let c = census(&f);
        prop_assert!(c.all_hold());
        prop_assert_eq!(c.e, 2 * c.r);
    }

    #[test]
    fn exchange_undoes_its_inverse(seed in 0u64..10_000, tiles in 2usize..12, pick in any::<prop::sample::Index>()) {
        let f = grown(seed, tiles, 1);
        let sites = exchange_inverse_sites(&f);
        prop_assume!(!sites.is_empty());
        let site = sites[pick.index(sites.len())];
        let Ok((g, _)) = apply_exchange_inverse(&f, &site) else { return Ok(()) };
        let fresh: Vec<u32> = g
            .elliptics
            .iter()
            .map(|e| e.id)
            .filter(|id| f.elliptic(*id).is_none())
            .collect();
        prop_assert_eq!(fresh.len(), 2);
        let back = fresh
            .iter()
            .filter(|&&v| check_exchange(&g, v).ok)
            .map(|&v| apply_exchange(&g, v).unwrap().0)
            .any(|h| isomorphic(&h, &f));
        prop_assert!(back);
    }

    #[test]
    fn reductions_reach_the_split_sphere_and_replay(seed in 0u64..10_000, tiles in 2usize..16) {
        let input = ReductionInput {
            foliation: grown(seed, tiles, 2),
            fdtc: Default::default(),
            mode: Mode::Split,
        };
        let trace = reduce_split(&input).unwrap();
        prop_assert_eq!(&trace.outcome, &Outcome::ReducedToSplit);
        let c = census(&trace.result);
        prop_assert_eq!((c.elliptics.total(), c.hyperbolics.total()), (2, 0));
        prop_assert!(audit(&input, &trace).unwrap().matches);
    }

    #[test]
    fn documents_round_trip_byte_for_byte(seed in 0u64..10_000, tiles in 2usize..16) {
        let text = foliation_document(&grown(seed, tiles, 2)).unwrap();
        let f: FoliatedSurface = Document::parse(&text, DocKind::Foliation).unwrap();
        prop_assert_eq!(foliation_document(&f).unwrap(), text);
    }
}
