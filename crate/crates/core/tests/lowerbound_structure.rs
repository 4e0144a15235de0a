use dba_core::dba::{run_dba, DbaOptions};
use dba_core::lowerbound::{
    gadget_positions, gadget_sequences, generate_gadget_instance, max_nearest_index_deviation,
    replicate_assignment, replicate_instance, GadgetParams,
};
use dba_core::PointSequence;

/// Lengths of maximal runs of identical consecutive points.
fn run_lengths(s: &PointSequence) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    let mut prev: Option<&[f64]> = None;
    for p in s.points() {
        if prev == Some(p) {
            *out.last_mut().unwrap() += 1;
        } else {
            out.push(1);
        }
        prev = Some(p);
    }
    out
}

#[test]
fn runs_follow_the_scaled_weights() {
    let scale = 2;
    let params = GadgetParams::new(2).with_scale(scale);
    let (g1, g2) = gadget_sequences(&params).unwrap();
    let w = |v: usize| v * scale;
    assert_eq!(
        run_lengths(&g1),
        vec![
            w(2500),
            w(27400),
            w(3100),
            w(1100),
            w(400),
            w(200),
            w(27400),
            w(3100),
            w(1100),
            w(400),
            w(200)
        ]
    );
    assert_eq!(
        run_lengths(&g2),
        vec![w(2500), w(100), w(1), w(200), w(100), w(1), w(200)]
    );
}

#[test]
fn positions_follow_the_table() {
    let params = GadgetParams::new(3);
    let g1 = gadget_positions(1, &params).unwrap();
    assert_eq!(g1.inner_radius, 1.0);
    assert_eq!(g1.outer_radius, 1.25);
    assert_eq!(g1.p, [1.25 * (1.0 - 1e-6), 0.0]);
    assert_eq!(g1.e, [g1.p[0], g1.p[1] + 1.0]);
    let g2 = gadget_positions(2, &params).unwrap();
    assert!((g2.inner_radius - 40.41608).abs() < 1e-12);
    assert!((g2.p[0] - (g1.s[0] + (1.0 - 1e-6) * 1.25 * 40.41608)).abs() < 1e-9);
    assert_eq!(g2.p[1], g1.s[1]);
    assert!(gadget_positions(0, &params).is_err());
}

#[test]
fn trivial_instance_converges_at_once() {
    let gi = generate_gadget_instance(&GadgetParams::new(0), false).unwrap();
    assert_eq!(gi.k, 1);
    assert_eq!(gi.instance.m(), 2500);
    let run = run_dba(
        &gi.instance,
        gi.k,
        &gi.initial_assignment,
        DbaOptions::default(),
    )
    .unwrap();
    assert_eq!(run.iterations, 1);
    assert_eq!(run.final_phi(), 0.0);
}

#[test]
fn traced_gadget_runs_keep_points_near_their_centers() {
    for g in 1..=3 {
        let gi = generate_gadget_instance(&GadgetParams::new(g), true).unwrap();
        let opts = DbaOptions {
            keep_assignments: true,
            ..DbaOptions::default()
        };
        let run = run_dba(&gi.instance, gi.k, &gi.initial_assignment, opts).unwrap();
        for r in &run.trace {
            let pi = r.assignment.as_ref().unwrap();
            assert!(pi.cluster_sizes().iter().all(|&s| s >= 2));
            let dev = max_nearest_index_deviation(&gi.instance, pi, &r.mean);
            assert!(dev <= 1, "g={g} iteration {} deviation {dev}", r.iteration);
        }
    }
}

#[test]
fn duplicated_gadget_instance_has_the_same_trace() {
    let gi = generate_gadget_instance(&GadgetParams::new(2), true).unwrap();
    let base = run_dba(
        &gi.instance,
        gi.k,
        &gi.initial_assignment,
        DbaOptions::default(),
    )
    .unwrap();
    let x2 = replicate_instance(&gi.instance, 2).unwrap();
    assert_eq!(x2.n(), 4);
    let p2 = replicate_assignment(&gi.initial_assignment, 2).unwrap();
    let rep = run_dba(&x2, gi.k, &p2, DbaOptions::default()).unwrap();
    assert_eq!(rep.iterations, base.iterations);
    for (a, b) in base.trace.iter().zip(&rep.trace) {
        assert_eq!(a.mean, b.mean);
        assert!((b.phi - 2.0 * a.phi).abs() <= 1e-9 * a.phi);
    }
}
