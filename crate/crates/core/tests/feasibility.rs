mod support;

use floorplan_core::model::occupancy_from_plan;
use floorplan_core::refine::{is_feasible, refine_plan, RefinerConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::{oracle_feasible, probe_center, Fixed, Scene, FACINGS};

#[test]
fn predicate_matches_the_oracle_on_random_triples() {
    let cfg = RefinerConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    let mut feasible = 0;
    while checked < 2000 {
        let n = rng.gen_range(1..=4);
        let scene = Scene::random(&mut rng, 20.0, n);
        let fixed = Fixed::new(&scene, 0);
        let obstacles = fixed.obstacle_boxes();
        for _ in 0..20 {
            let mut item = fixed.plan.furniture[0].clone();
            item.facing = FACINGS[rng.gen_range(0..4)];
            let fp = item.footprint.unwrap();
            let p = probe_center(
                &mut rng,
                &scene,
                &obstacles,
                fp.width,
                fp.depth,
                item.facing,
                cfg.clearance_delta,
                cfg.flush_tolerance,
            );
            let ours = is_feasible(&item, p, fixed.room(), &fixed.occupancy, &cfg);
            let oracle = oracle_feasible(
                &scene,
                &obstacles,
                fp.width,
                fp.depth,
                fp.wall_adjacent,
                p,
                item.facing,
                cfg.clearance_delta,
                cfg.flush_tolerance,
            );
            assert_eq!(
                (ours.a, ours.b, ours.c),
                (oracle.a, oracle.b, oracle.c),
                "{scene:?} {p:?} {:?}",
                item.facing
            );
            feasible += usize::from(ours.overall);
            checked += 1;
        }
    }
    assert!(feasible > 50, "too few feasible probes: {feasible}");
}

#[test]
fn every_placed_item_is_feasible_after_refinement() {
    let cfg = RefinerConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut placed = 0;
    for _ in 0..150 {
        let n = rng.gen_range(1..=5);
        let scene = Scene::random(&mut rng, 20.0, n);
        let plan = scene.plan();
        let r = refine_plan(&plan, &cfg).unwrap();
        let room = r.plan.room("Den").unwrap();
        for item in r
            .plan
            .furniture
            .iter()
            .filter(|f| f.refined_center.is_some())
        {
            let occ = occupancy_from_plan(&r.plan, Some(item.id), 0.0);
            let v = is_feasible(item, item.refined_center.unwrap(), room, &occ, &cfg);
            assert!(v.overall, "{scene:?} {} {v:?}", item.id);
            placed += 1;
        }
    }
    assert!(placed > 100);
}

#[test]
fn traces_respect_the_iteration_budget() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..150 {
        let cfg = RefinerConfig {
            max_iterations: rng.gen_range(1..=60),
            step_lambda: [0.1, 0.25, 0.5, 1.0][rng.gen_range(0..4)],
            ..RefinerConfig::default()
        };
        let n = rng.gen_range(1..=6);
        let scene = Scene::random(&mut rng, 14.0, n);
        let r = refine_plan(&scene.plan(), &cfg).unwrap();
        for t in &r.traces {
            assert!(
                t.steps.len() <= cfg.max_iterations + 1,
                "{} steps for {}",
                t.steps.len(),
                t.item
            );
        }
    }
}
