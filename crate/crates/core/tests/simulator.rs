use proptest::prelude::*;
use qhammer_core::circuit::{Circuit, Gate};
use qhammer_core::factory::{build_circuit, ExperimentSpec};
use qhammer_core::labels::{Config, ExperimentLabel};
use qhammer_core::simulator::{calibrate, simulate, NoiseModel};
use qhammer_core::topology::{load_device_map, CouplingGraph};

fn eagle() -> CouplingGraph {
    load_device_map("eagle127").unwrap()
}

/// `g` X gates on a neighbour of centre 72, then the measurement.
fn kicks(g: usize) -> Circuit {
    let mut c = Circuit::new(127, 1);
    for _ in 0..g {
        c.push(Gate::x(62));
    }
    c.push(Gate::measure(72, 0));
    c
}

fn arb_noise() -> impl Strategy<Value = NoiseModel> {
    (
        any::<bool>(),
        0.0f64..3.0,
        0.0f64..0.5,
        0.0f64..0.2,
        0.0f64..0.2,
    )
        .prop_map(|(coh, theta, p, e0, e1)| {
            let base = if coh {
                NoiseModel::coherent(theta)
            } else {
                NoiseModel::stochastic(p)
            };
            base.with_readout(e0, e1)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn deterministic_and_conserving(noise in arb_noise(), g in 0usize..40, seed in any::<u64>(), shots in 1u64..2000) {
        let graph = eagle();
        let c = kicks(g);
        let a = simulate(&c, &graph, &noise, seed, shots).unwrap();
        let b = simulate(&c, &graph, &noise, seed, shots).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(a.n0 + a.n1, shots);
    }

    #[test]
    fn built_circuits_conserve_shots(extra in 0u32..4, centre in proptest::sample::select(vec![15usize, 34, 54, 72, 93, 109]),
                                     cfg in proptest::sample::select(vec![Config::Thirty, Config::Thirty1H, Config::Cross4]),
                                     noise in arb_noise(), shots in 1u64..500) {
        let graph = eagle();
        let c = build_circuit(&ExperimentSpec::new(ExperimentLabel::cx(centre, extra, cfg)), &graph).unwrap();
        let counts = simulate(&c, &graph, &noise, 3, shots).unwrap();
        prop_assert!(counts.is_valid());
        prop_assert_eq!(counts.shots, shots);
    }
}

#[test]
fn calibrate_then_simulate_hits_target() {
    let graph = eagle();
    let spec = ExperimentSpec::new(ExperimentLabel::cx(93, 2, Config::Thirty));
    let template = NoiseModel::coherent(0.0).with_readout(0.01, 0.03);
    for target in [0.2, 0.5, 0.9] {
        let model = calibrate(target, &spec, &graph, &template).unwrap();
        let c = build_circuit(&spec, &graph).unwrap();
        let counts = simulate(&c, &graph, &model, 17, 40_000).unwrap();
        let sigma = (target * (1.0 - target) / 40_000.0).sqrt();
        assert!(
            (counts.fraction_one() - target).abs() <= 3.0 * sigma,
            "target {target}: {counts:?}"
        );
    }
}
