//! The seven acceptance criteria, one pass/fail line each.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use obf_core::cli::generate::{grow_sphere, seed_sphere, separating_change_site, GrowConfig};
use obf_core::foliation::fdtc::fdtc_estimate_check;
use obf_core::foliation::iso::isomorphic;
use obf_core::foliation::{census, validate, FoliatedSurface};
use obf_core::moves::{
    apply_bypass, apply_exchange, apply_foliation_change, bypass_sites, check_exchange,
    foliation_change_sites, hexagon, tree_condition, ChangeOutcome, MoveKind,
};
use obf_core::movie::standard::rigid_sphere_movie;
use obf_core::movie::{compile_movie, HexagonType};
use obf_core::page::build::{grid_column_arc, grid_disc, grid_row_arc};
use obf_core::page::{classify_arc, is_tree, EmbeddedCurve, Page};
use obf_core::reduce::{audit, reduce_split, Mode, Outcome, ReductionInput};
use obf_core::stabilize::{
    collar_leaves, flip_bigon, relate_prime_doubleprime, relation_witnesses, sign_relation_holds,
    stabilize_intersecting, Crossing, StabilizationSpec, Stabilized,
};
use obf_core::{Rational, Sign};

type Verdict = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    check(t.elapsed() < limit, || {
        format!("took {:.2?}, limit {limit:?}", t.elapsed())
    })
}

/// Valence counted straight from leaf endpoints.
fn ends_at(f: &FoliatedSurface, v: u32) -> i64 {
    f.leaves
        .iter()
        .map(|l| (l.from == Some(v)) as i64 + (l.to == Some(v)) as i64)
        .sum()
}

fn signs<T>(items: &[T], sign: impl Fn(&T) -> Sign) -> (i64, i64) {
    let p = items.iter().filter(|x| sign(x).is_pos()).count() as i64;
    (p, items.len() as i64 - p)
}

fn grown(seed: u64, tiles: usize) -> FoliatedSurface {
    grow_sphere(
        seed,
        &GrowConfig {
            tiles,
            ..Default::default()
        },
    )
    .unwrap()
    .surface
}

fn census_suite() -> Verdict {
    let t = Instant::now();
    for seed in 0..200u64 {
        let tiles = 2 + (seed as usize * 7) % 39;
        let f = grown(seed, tiles);
        check(f.bb_only() && f.regions.len() <= 40, || {
            format!("seed {seed}: not a bb-only sphere of at most 40 tiles")
        })?;
        let c = census(&f);
        let v = |i: u32| c.valence_count(i);
        let vs: Vec<(i64, i64)> = c.v.iter().map(|(&i, &n)| (i as i64, n)).collect();
        let (e, r) = (c.e, c.r);
        let ids = [
            2 * e == 4 * r,
            vs.iter().map(|(i, n)| i * n).sum::<i64>() == 2 * e,
            vs.iter().map(|(_, n)| n).sum::<i64>() - e + r == 2,
            vs.iter().map(|(i, n)| (4 - i) * n).sum::<i64>() == 8,
            2 * v(2) + v(3)
                == 8 + vs
                    .iter()
                    .filter(|(i, _)| *i > 4)
                    .map(|(i, n)| (i - 4) * n)
                    .sum::<i64>(),
        ];
        check(ids.iter().all(|&x| x) && c.all_hold(), || {
            format!("seed {seed}: identities {ids:?}")
        })?;
    }
    within(t, Duration::from_secs(5))?;
    Ok(format!(
        "200 spheres, 5 identities each, {:.2?}",
        t.elapsed()
    ))
}

fn move_contracts() -> Verdict {
    let (mut changes, mut exchanges, mut bypasses) = (0, 0, 0);
    let mut seed = 0;
    while (changes < 100 || exchanges < 100 || bypasses < 100) && seed < 500 {
        let f = grown(seed, 10);
        seed += 1;
        for (r1, r2) in foliation_change_sites(&f) {
            if changes >= 100 {
                break;
            }
            let hex = hexagon(
                &f,
                f.region(r1).unwrap().cycles[0]
                    .iter()
                    .map(|s| s.leaf)
                    .find(|l| f.region(r2).unwrap().cycles[0].iter().any(|s| s.leaf == *l))
                    .unwrap(),
            )
            .unwrap();
            let outcome = if changes % 2 == 0 {
                ChangeOutcome::B
            } else {
                ChangeOutcome::C
            };
            let (g, _) = apply_foliation_change(&f, r1, r2, outcome).map_err(|e| e.to_string())?;
            check(
                g.elliptics.len() == f.elliptics.len()
                    && g.hyperbolics.len() == f.hyperbolics.len(),
                || "change altered counts".into(),
            )?;
            let [a, _, _, d, _, _] = hex.nodes;
            for x in [a, d] {
                check(ends_at(&g, x) == ends_at(&f, x) - 1, || {
                    format!("seed {seed}: valence of {x} did not drop by one")
                })?;
            }
            changes += 1;
        }
        for e in f
            .elliptics
            .iter()
            .map(|e| e.id)
            .filter(|&v| check_exchange(&f, v).ok)
        {
            if exchanges >= 100 {
                break;
            }
            let (g, _) = apply_exchange(&f, e).map_err(|e| e.to_string())?;
            let (ep, en) = signs(&f.elliptics, |e| e.sign);
            let (gp, gn) = signs(&g.elliptics, |e| e.sign);
            let (hp, hn) = signs(&f.hyperbolics, |h| h.sign);
            let (kp, kn) = signs(&g.hyperbolics, |h| h.sign);
            check((ep - gp, en - gn, hp - kp, hn - kn) == (1, 1, 1, 1), || {
                format!("seed {seed}: exchange at {e} removed the wrong points")
            })?;
            exchanges += 1;
        }
        for (b, w) in bypass_sites(&f) {
            if bypasses >= 100 {
                break;
            }
            // Type1 when the tile where b is born is positive
            let birth = f.leaf_regions()[&b].0.and_then(|r| f.region(r)).unwrap();
            let ty = if f.hyperbolic(birth.hyperbolic).unwrap().sign.is_pos() {
                HexagonType::Type1
            } else {
                HexagonType::Type2
            };
            let (g, rec) = apply_bypass(&f, b, &w).map_err(|e| e.to_string())?;
            check(
                g.elliptics.len() == f.elliptics.len()
                    && g.hyperbolics.len() == f.hyperbolics.len(),
                || "bypass altered counts".into(),
            )?;
            check(
                rec.dividing_set_changed == (ty == HexagonType::Type1),
                || format!("seed {seed}: bypass at {b} is {ty:?}"),
            )?;
            check(
                (rec.kind == MoveKind::BypassRetro) == (ty == HexagonType::Type1),
                || "bypass kind".into(),
            )?;
            bypasses += 1;
        }
    }
    check(
        changes == 100 && exchanges == 100 && bypasses == 100,
        || format!("sites found: {changes}/{exchanges}/{bypasses}"),
    )?;
    Ok("100 foliation changes, 100 exchanges, 100 bypasses".into())
}

fn rigid_sphere() -> Verdict {
    let f = compile_movie(&rigid_sphere_movie()).map_err(|e| e.to_string())?;
    let c = census(&f);
    check(
        f.regions.len() == 2 && f.bb_only() && c.valence_count(2) == 4,
        || {
            format!(
                "compiled to {} tiles, V(2) = {}",
                f.regions.len(),
                c.valence_count(2)
            )
        },
    )?;
    for e in &f.elliptics {
        let app = check_exchange(&f, e.id);
        check(
            !app.ok
                && app
                    .failed_conditions
                    .iter()
                    .any(|x| x.reason.contains("strongly essential")),
            || format!("exchange at {} was not blocked", e.id),
        )?;
    }
    Ok("2 bb-tiles, V(2) = 4, exchange blocked at all 4 vertices".into())
}

fn reduction() -> Verdict {
    let t = Instant::now();
    let mut steps = 0;
    for seed in 0..100u64 {
        let input = ReductionInput {
            foliation: grown(seed, 16),
            fdtc: BTreeMap::new(),
            mode: Mode::Split,
        };
        let trace = reduce_split(&input).map_err(|e| e.to_string())?;
        check(trace.outcome == Outcome::ReducedToSplit, || {
            format!("seed {seed}: {:?}", trace.outcome)
        })?;
        let c = census(&trace.result);
        check(
            (c.elliptics.total(), c.hyperbolics.total()) == (2, 0),
            || format!("seed {seed}: final census"),
        )?;
        check(trace.steps.iter().all(|s| s.post_census.all_hold()), || {
            format!("seed {seed}: a step broke the census")
        })?;
        let rep = audit(&input, &trace).map_err(|e| format!("seed {seed}: {e}"))?;
        check(rep.matches, || format!("seed {seed}: hash mismatch"))?;
        steps += trace.steps.len();
    }
    within(t, Duration::from_secs(30))?;
    Ok(format!(
        "100 spheres reduced in {steps} steps, every replay matched, {:.2?}",
        t.elapsed()
    ))
}

fn stabilized(m: usize, sign: Sign) -> Stabilized {
    if m == 1 {
        let mut f = seed_sphere(Rational::integer(2));
        let mut page = Page::new(grid_disc(2, &[]).unwrap());
        page.register("b", grid_row_arc(2, 1)).unwrap();
        f.page = Some(page);
        f.leaves[0].curve = Some("b".into());
        let spec = StabilizationSpec {
            alpha: Some(grid_column_arc(2, 1)),
            sign,
            crossings: vec![Crossing {
                leaf: 1,
                upward: true,
            }],
        };
        return stabilize_intersecting(&f, &spec).unwrap();
    }
    let mut f = grown(m as u64, 8);
    f.page = None;
    let crossings = collar_leaves(&f)
        .into_iter()
        .take(m)
        .enumerate()
        .map(|(i, leaf)| Crossing {
            leaf,
            upward: i % 2 == 0,
        })
        .collect();
    stabilize_intersecting(
        &f,
        &StabilizationSpec {
            alpha: None,
            sign,
            crossings,
        },
    )
    .unwrap()
}

fn stabilization() -> Verdict {
    let want = [
        MoveKind::ExchangeInverse,
        MoveKind::BypassRetro,
        MoveKind::BypassPro,
        MoveKind::Exchange,
    ];
    let mut related = 0;
    for m in 1..=3 {
        for sign in [Sign::Pos, Sign::Neg] {
            let s = stabilized(m, sign);
            check(s.bigons.len() == m && sign_relation_holds(&s), || {
                format!("m = {m}: sign relation")
            })?;
            for b in &s.bigons {
                let sgn = |f: &FoliatedSurface, h: u32| f.hyperbolic(h).unwrap().sign;
                let (p1, q1, p2, q2) = (
                    sgn(&s.prime, b.p),
                    sgn(&s.prime, b.q),
                    sgn(&s.doubleprime, b.p),
                    sgn(&s.doubleprime, b.q),
                );
                check(p1 == -p2 && p1 == -q1 && p1 == q2, || {
                    format!("m = {m}: bigon {} signs", b.leaf)
                })?;
            }
            let mut g = s.prime.clone();
            for b in &s.bigons {
                let target = flip_bigon(&g, b).map_err(|e| e.to_string())?;
                let plan =
                    relation_witnesses(&g, b, &target).map_err(|e| format!("m = {m}: {e}"))?;
                let trace = relate_prime_doubleprime(&g, &plan).map_err(|e| e.to_string())?;
                let kinds: Vec<MoveKind> = trace.steps.iter().map(|s| s.kind).collect();
                check(kinds == want, || format!("m = {m}: trace {kinds:?}"))?;
                check(isomorphic(&trace.result, &target), || {
                    format!("m = {m}: final bi-gon differs")
                })?;
                check(trace.steps.iter().all(|s| s.post_census.all_hold()), || {
                    "census".into()
                })?;
                g = trace.result;
                related += 1;
            }
            if m == 1 {
                check(isomorphic(&g, &s.doubleprime), || {
                    "m = 1: not isomorphic to F''".into()
                })?;
            }
            check(validate(&g).is_valid(), || "invalid related state".into())?;
        }
    }
    Ok(format!(
        "m = 1, 2, 3 with both signs, {related} bi-gons related in 4 moves each"
    ))
}

fn separating_sufficiency() -> Verdict {
    for seed in 0..100u64 {
        let site = separating_change_site(seed).map_err(|e| e.to_string())?;
        let s = &site.page.surface;
        check(
            classify_arc(s, &site.b)
                .map_err(|e| e.to_string())?
                .separating,
            || format!("seed {seed}: b not separating"),
        )?;
        let [l1, l3, l5] = &site.leaves;
        let (ok, how) = tree_condition(
            &site.page,
            &site.b,
            [l1, l3, l5],
            [&site.arcs[0], &site.arcs[1]],
        )
        .map_err(|e| e.to_string())?;
        check(ok && how == "b separating", || {
            format!("seed {seed}: sufficient condition not used")
        })?;
        let gammas: Vec<EmbeddedCurve> = site
            .arcs
            .iter()
            .map(|w| EmbeddedCurve::arc(w.clone()))
            .collect();
        let all = [l1, l3, l5, &gammas[0], &gammas[1]];
        check(is_tree(s, &all).map_err(|e| e.to_string())?, || {
            format!("seed {seed}: direct test disagrees")
        })?;
    }
    Ok("100 separating sites, direct tree test agreed on all".into())
}

fn fdtc_obstruction() -> Verdict {
    let f = compile_movie(&rigid_sphere_movie()).map_err(|e| e.to_string())?;
    let mut seen = Vec::new();
    for v in [1, 2] {
        let e = f.elliptic(v).unwrap();
        // tile corners at v: each corner contributes two sides touching v
        let (mut p, mut n) = (0i64, 0i64);
        for r in &f.regions {
            let touching = r.cycles[0]
                .iter()
                .filter(|s| {
                    f.leaf(s.leaf)
                        .is_some_and(|l| l.from == Some(v) || l.to == Some(v))
                })
                .count() as i64;
            let sign = f.hyperbolic(r.hyperbolic).unwrap().sign;
            if sign.is_pos() {
                p += touching / 2
            } else {
                n += touching / 2
            }
        }
        let (lo, hi) = if e.sign.is_pos() { (-p, n) } else { (-n, p) };
        for c in [2, -2] {
            let fdtc = BTreeMap::from([(e.binding.clone(), Rational::integer(c))]);
            let rep = fdtc_estimate_check(&f, v, &fdtc).map_err(|e| e.to_string())?;
            check(ends_at(&f, v) == 2, || format!("{v} is not of valence 2"))?;
            check(
                (rep.p, rep.n, rep.lower, rep.upper) == (p, n, lo, hi),
                || format!("{v}: branch {:?}", (rep.lower, rep.upper)),
            )?;
            check(!rep.holds, || format!("{v}: c = {c} within [{lo}, {hi}]"))?;
            seen.push((e.sign, c > 0));
        }
    }
    seen.sort_by_key(|(s, c)| (s.is_pos(), *c));
    seen.dedup();
    check(seen.len() == 4, || "missing sign combinations".into())?;
    Ok("v = +/- with c = +/-2: all four violate the estimate".into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Verdict); 7] = [
        ("1 census identities", census_suite),
        ("2 move contracts", move_contracts),
        ("3 rigid sphere", rigid_sphere),
        ("4 reduction soundness", reduction),
        ("5 stabilization", stabilization),
        ("6 separating sufficiency", separating_sufficiency),
        ("7 fdtc obstruction", fdtc_obstruction),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                println!("FAIL criterion {name}: {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
