use std::path::PathBuf;
use std::process::Command as Process;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};

use qdlab::ensembles::CouplingDistribution;
use qdlab_cli::config::{ClusterBoundConfig, EmchTraceConfig};
use qdlab_cli::{Command, ExperimentConfig, Manifest, CONFIG_FILE, MANIFEST_FILE};

fn bin() -> Process {
    Process::new(env!("CARGO_BIN_EXE_qdlab"))
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qdlab-cli-{}-{tag}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn distribution() -> impl Strategy<Value = CouplingDistribution> {
    prop_oneof![
        Just(CouplingDistribution::Bernoulli),
        Just(CouplingDistribution::Uniform),
        (1e-6f64..1e6).prop_map(|variance| CouplingDistribution::Gaussian { variance }),
    ]
}

proptest! {
    #[test]
    fn config_json_round_trips(
        seed in any::<u64>(),
        dist in distribution(),
        z in 1u32..8,
        beta in -1e9f64..1e9,
        gamma in any::<f64>().prop_filter("finite", |x| x.is_finite()),
        tmax in 1e-300f64..1e300,
        points in 0usize..10_000,
        samples in 0usize..10_000_000,
    ) {
        let config = ExperimentConfig {
            seed,
            output: PathBuf::from("some/dir"),
            command: Command::EmchTrace(EmchTraceConfig {
                distribution: dist,
                z,
                beta,
                gamma,
                tmax,
                points,
                samples,
            }),
        };
        let back = ExperimentConfig::from_json(&config.to_json()).unwrap();
        prop_assert_eq!(back, config);
    }
}

#[test]
fn unknown_config_fields_are_rejected() {
    let config = ExperimentConfig {
        seed: 3,
        output: PathBuf::from("x"),
        command: Command::EaClusterBound(ClusterBoundConfig {
            d: 2,
            distribution: CouplingDistribution::Bernoulli,
            samples: 10,
        }),
    };
    let text = config.to_json().replace("\"samples\"", "\"sample_count\"");
    let err = ExperimentConfig::from_json(&text).unwrap_err();
    assert_eq!(err.exit_code(), qdlab_cli::EXIT_INVALID_CONFIG);
}

#[test]
fn exit_codes() {
    let out = scratch("exit");
    let cases: &[(&[&str], i32)] = &[
        (&["spectrum", "--v", "1.5"], 2),
        (&["emch", "trace", "--z", "3"], 2),
        (&["spectrum", "--no-such-flag"], 2),
        (&["ea", "ground-state", "--d", "3", "--side", "4", "--bc", "periodic"], 3),
        (&["ea", "cluster-bound", "--d", "2"], 0),
    ];
    for (args, code) in cases {
        let status = bin().args(*args).arg("--out").arg(&out).output().unwrap().status;
        assert_eq!(status.code(), Some(*code), "{args:?}");
    }
    let status = bin()
        .args(["ea", "cluster-bound", "--out"])
        .arg(&out)
        .env("QDLAB_THREADS", "many")
        .output()
        .unwrap()
        .status;
    assert_eq!(status.code(), Some(2));
    let _ = std::fs::remove_dir_all(&out);
}

#[test]
fn io_failure_exits_with_io_code() {
    let dir = scratch("io");
    std::fs::create_dir_all(&dir).unwrap();
    let blocker = dir.join("file");
    std::fs::write(&blocker, "not a directory").unwrap();
    let status = bin()
        .args(["ea", "cluster-bound", "--out"])
        .arg(blocker.join("sub"))
        .output()
        .unwrap()
        .status;
    assert_eq!(status.code(), Some(5));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn outputs_carry_header_comments_and_manifest() {
    let out = scratch("headers");
    let run = bin()
        .args(["ensemble", "check", "--dist", "uniform", "--samples", "500", "--seed", "4", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(run.status.success());

    let text = std::fs::read_to_string(out.join("ensemble_moments.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let header_at = lines.iter().position(|l| !l.starts_with('#')).unwrap();
    let header: Vec<&str> = lines[header_at].split(',').collect();
    assert_eq!(header, ["n", "exact_moment", "sample_moment", "sample_stderr", "factorial_bound"]);
    for column in &header {
        let described = lines[..header_at].iter().any(|l| l.starts_with(&format!("# {column}: ")));
        assert!(described, "column {column} lacks a description");
    }
    assert_eq!(lines.len() - header_at - 1, 20);
    assert!(!text.contains('\r'));

    let manifest: Manifest = serde_json::from_str(&std::fs::read_to_string(out.join(MANIFEST_FILE)).unwrap()).unwrap();
    assert_eq!(manifest.subcommand, "ensemble check");
    assert_eq!(manifest.seed, 4);
    assert_eq!(manifest.outputs, ["ensemble_moments.csv", "ensemble_summary.csv"]);
    let saved = ExperimentConfig::from_json(&std::fs::read_to_string(out.join(CONFIG_FILE)).unwrap()).unwrap();
    assert_eq!(saved, manifest.config);
    let _ = std::fs::remove_dir_all(&out);
}

#[test]
fn seeds_change_sampled_columns_only() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(99);
    let (a, b): (u64, u64) = (rng.random_range(1..1000), rng.random_range(1000..2000));
    let tables: Vec<String> = [a, b]
        .iter()
        .map(|seed| {
            let out = scratch(&format!("seed-{seed}"));
            let run = bin()
                .args(["ensemble", "check", "--samples", "300", "--seed"])
                .arg(seed.to_string())
                .arg("--out")
                .arg(&out)
                .output()
                .unwrap();
            assert!(run.status.success());
            let text = std::fs::read_to_string(out.join("ensemble_moments.csv")).unwrap();
            let _ = std::fs::remove_dir_all(&out);
            text
        })
        .collect();
    let column = |text: &str, k: usize| -> Vec<String> {
        text.lines()
            .filter(|l| !l.starts_with('#'))
            .skip(1)
            .map(|l| l.split(',').nth(k).unwrap().to_string())
            .collect()
    };
    assert_eq!(column(&tables[0], 1), column(&tables[1], 1));
    assert_ne!(column(&tables[0], 2), column(&tables[1], 2));
}
