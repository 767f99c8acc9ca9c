use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use qmarl::env::{
    random_walk_rollout, transition, trajectory_line, Action, EnvConfig, EnvError, EnvState, OffloadEnv,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn reference_penalty(config: &EnvConfig, next_clouds: &[f64], pre_clip: &[f64]) -> f64 {
    next_clouds
        .iter()
        .zip(pre_clip)
        .map(|(q, pre)| {
            let tilde = pre.abs();
            let mut p = 0.0;
            if *q == 0.0 {
                p += tilde;
            }
            if *q == config.q_max {
                p += (config.q_max - tilde).abs() * config.w_r;
            }
            p
        })
        .sum()
}

#[test]
fn random_steps_respect_invariants() {
    let config = EnvConfig {
        seed: 99,
        ..EnvConfig::default()
    };
    let mut env = OffloadEnv::new(config.clone()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut boundary_hits = 0;
    for _ in 0..10_000 {
        if env.is_done() {
            env.reset();
        }
        let before = env.state().clone();
        let actions: Vec<usize> = (0..4).map(|_| rng.gen_range(0..4)).collect();
        let out = env.step_indices(&actions).unwrap();
        let after = env.state();

        for q in after.edge_queues.iter().chain(&after.cloud_queues) {
            assert!((0.0..=1.0).contains(q));
        }
        assert!(out.reward <= 0.0);
        for ((sent, q), a) in out.sent.iter().zip(&before.edge_queues).zip(&actions) {
            assert!(*sent <= *q);
            assert!(*sent <= config.packet_amounts[a % 2]);
        }
        assert_eq!(after.edge_queues_prev, before.edge_queues);
        assert_eq!(after.observations().len(), 4);
        assert!(after.observations().iter().all(|o| o.len() == 4));
        assert_eq!(after.global_state().len(), 16);

        let boundary = after.cloud_queues.iter().any(|q| *q == 0.0 || *q == 1.0);
        if boundary {
            boundary_hits += 1;
        } else {
            assert_eq!(out.reward, 0.0);
        }
        let expected = -reference_penalty(&config, &after.cloud_queues, &out.cloud_pre_clip);
        assert_abs_diff_eq!(out.reward, expected, epsilon = 1e-12);
    }
    assert!(boundary_hits > 0, "the walk never reached a boundary");
}

fn replay(seed: u64, action_seed: u64) -> Vec<String> {
    let mut env = OffloadEnv::new(EnvConfig {
        seed,
        ..EnvConfig::default()
    })
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(action_seed);
    let mut lines = Vec::new();
    for _ in 0..3 {
        env.reset();
        while !env.is_done() {
            let actions: Vec<usize> = (0..4).map(|_| rng.gen_range(0..4)).collect();
            let out = env.step_indices(&actions).unwrap();
            lines.push(trajectory_line(env.state(), &actions, out.reward));
        }
    }
    lines
}

#[test]
fn seeded_replay_is_bit_exact() {
    assert_eq!(replay(17, 3), replay(17, 3));
    assert_ne!(replay(17, 3), replay(18, 3));
}

#[test]
fn reseed_restarts_the_arrival_stream() {
    let mut env = OffloadEnv::new(EnvConfig::default()).unwrap();
    let run = |env: &mut OffloadEnv| -> Vec<EnvState> {
        env.reseed(42);
        (0..10)
            .map(|_| {
                env.step_indices(&[0, 1, 2, 3]).unwrap();
                env.state().clone()
            })
            .collect()
    };
    let first = run(&mut env);
    assert_eq!(first, run(&mut env));
}

fn single_cloud(amount: f64) -> EnvConfig {
    EnvConfig {
        n_clouds: 1,
        n_edges: 1,
        packet_amounts: vec![amount],
        ..EnvConfig::default()
    }
}

#[test]
fn overflow_example() {
    let config = single_cloud(0.7);
    let state = EnvState {
        edge_queues: vec![1.0],
        edge_queues_prev: vec![1.0],
        cloud_queues: vec![0.9],
        step_index: 0,
    };
    let act = [Action {
        destination: 0,
        amount_index: 0,
    }];
    let (next, out) = transition(&config, &state, &act, &[0.0]).unwrap();
    assert_eq!(next.cloud_queues, vec![1.0]);
    assert_abs_diff_eq!(out.cloud_pre_clip[0], 1.3, epsilon = 1e-12);
    assert_abs_diff_eq!(out.reward, -1.2, epsilon = 1e-12);
    assert_eq!(out.full_clouds, 1);
}

#[test]
fn empty_examples() {
    let config = single_cloud(0.1);
    let act = [Action {
        destination: 0,
        amount_index: 0,
    }];
    // nothing to send, cloud drains exactly to zero: pre-clip magnitude 0
    let state = EnvState {
        edge_queues: vec![0.0],
        edge_queues_prev: vec![0.0],
        cloud_queues: vec![0.3],
        step_index: 0,
    };
    let (next, out) = transition(&config, &state, &act, &[0.0]).unwrap();
    assert_eq!(next.cloud_queues, vec![0.0]);
    assert_eq!(out.reward, 0.0);
    assert_eq!(out.sent, vec![0.0]);

    // clipped from below: penalty is |pre-clip|
    let state = EnvState {
        cloud_queues: vec![0.1],
        ..state
    };
    let (next, out) = transition(&config, &state, &act, &[0.0]).unwrap();
    assert_eq!(next.cloud_queues, vec![0.0]);
    assert_abs_diff_eq!(out.reward, -0.2, epsilon = 1e-12);
}

#[test]
fn interior_step_has_zero_reward() {
    let config = EnvConfig::default();
    let state = EnvState::initial(&config);
    let acts: Vec<Action> = (0..4)
        .map(|i| Action::from_index(i, &config).unwrap())
        .collect();
    let (next, out) = transition(&config, &state, &acts, &[0.1; 4]).unwrap();
    assert_eq!(out.reward, 0.0);
    // cloud 0 gets 0.1 + 0.2, cloud 1 gets 0.1 + 0.2
    assert_abs_diff_eq!(next.cloud_queues[0], 0.5, epsilon = 1e-12);
    assert_abs_diff_eq!(next.edge_queues[1], 0.4, epsilon = 1e-12);
}

#[test]
fn reset_observations() {
    let mut env = OffloadEnv::new(EnvConfig::default()).unwrap();
    let obs = env.reset();
    assert!(obs.iter().all(|o| o == &vec![0.5; 4]));
    assert_eq!(env.state().global_state(), vec![0.5; 16]);
}

#[test]
fn action_index_round_trip() {
    let config = EnvConfig::default();
    for i in 0..config.n_actions() {
        assert_eq!(Action::from_index(i, &config).unwrap().index(&config), i);
    }
    assert_eq!(
        Action::from_index(3, &config).unwrap(),
        Action {
            destination: 1,
            amount_index: 1
        }
    );
    assert!(matches!(
        Action::from_index(4, &config),
        Err(EnvError::ActionIndex { .. })
    ));
}

#[test]
fn malformed_actions_are_rejected() {
    let mut env = OffloadEnv::new(EnvConfig::default()).unwrap();
    assert!(matches!(
        env.step_indices(&[0, 0, 0]),
        Err(EnvError::ActionCount { expected: 4, got: 3 })
    ));
    let bad = [Action {
        destination: 2,
        amount_index: 0,
    }; 4];
    assert!(matches!(env.step(&bad), Err(EnvError::Destination { .. })));
    assert_eq!(env.state().step_index, 0);
}

#[test]
fn invalid_configs_are_rejected() {
    for config in [
        EnvConfig {
            q_max: 0.0,
            ..EnvConfig::default()
        },
        EnvConfig {
            packet_amounts: vec![],
            ..EnvConfig::default()
        },
        EnvConfig {
            episode_length: 0,
            ..EnvConfig::default()
        },
    ] {
        assert!(matches!(OffloadEnv::new(config), Err(EnvError::Config(_))));
    }
}

#[test]
fn random_walk_is_negative_and_deterministic() {
    let config = EnvConfig {
        seed: 3,
        ..EnvConfig::default()
    };
    let a = random_walk_rollout(&config, 100).unwrap();
    assert!(a < 0.0);
    assert_eq!(a, random_walk_rollout(&config, 100).unwrap());
    assert!(random_walk_rollout(&config, 0).is_err());
}

proptest! {
    #[test]
    fn transition_keeps_queues_in_range(
        edges in prop::collection::vec(0.0f64..=1.0, 4),
        clouds in prop::collection::vec(0.0f64..=1.0, 2),
        arrivals in prop::collection::vec(0.0f64..=0.3, 4),
        actions in prop::collection::vec(0usize..4, 4),
    ) {
        let config = EnvConfig::default();
        let state = EnvState {
            edge_queues: edges.clone(),
            edge_queues_prev: edges,
            cloud_queues: clouds,
            step_index: 0,
        };
        let acts: Vec<Action> = actions.iter().map(|i| Action::from_index(*i, &config).unwrap()).collect();
        let (next, out) = transition(&config, &state, &acts, &arrivals).unwrap();
        prop_assert!(next.edge_queues.iter().chain(&next.cloud_queues).all(|q| (0.0..=1.0).contains(q)));
        prop_assert!(out.reward <= 0.0);
        let received: f64 = out.sent.iter().sum();
        let pre_sum: f64 = out.cloud_pre_clip.iter().sum();
        let before: f64 = state.cloud_queues.iter().sum();
        prop_assert!((pre_sum - (before - 0.6 + received)).abs() < 1e-12);
    }
}
