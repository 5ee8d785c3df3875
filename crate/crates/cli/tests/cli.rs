use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use logjac::{FieldKind, GeneratorVariant, SliceKey};
use logjac_cli::{Cache, CacheEntry, Coefficients, InstanceSpec};
use proptest::prelude::*;
use tempfile::tempdir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn logjac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logjac")).args(args).output().expect("binary runs")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = logjac(args);
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn hodge_table_exits_zero() {
    let inst = fixture("cubic_line.json");
    let (code, out, _) = run(&["ring", "hodge", "--instance", path_str(&inst)]);
    assert_eq!(code, 0);
    let dims: Vec<&str> = out.lines().skip(2).take(2).map(|l| l.split_whitespace().last().unwrap()).collect();
    assert_eq!(dims, ["3", "1"]);
}

#[test]
fn fermat_verify_exits_zero() {
    let (code, out, _) = run(&["fermat", "verify"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("certificate") && l.ends_with("true")));
}

#[test]
fn minimal_variant_pairing_exits_one() {
    let inst = fixture("cubic_line_minimal.json");
    let (code, out, err) = run(&["ring", "pairing", "--instance", path_str(&inst)]);
    assert_eq!(code, 1);
    assert!(out.contains("socle B_1(1) has dimension"));
    assert!(err.contains("expected 1"));
}

#[test]
fn usage_errors_exit_two() {
    let (code, _, err) = run(&["ring", "hodge", "--instance", path_str(&fixture("malformed.json"))]);
    assert_eq!(code, 2);
    assert!(err.contains("malformed.json:7:"), "{err}");
    assert!(err.contains("expected u64"));

    assert_eq!(run(&["ring", "hodge"]).0, 2);
    assert_eq!(run(&["ring", "dims", "--nde", "2,3,1", "--field", "Fp:12"]).0, 2);
    assert_eq!(run(&["no-such-command"]).0, 2);
    assert_eq!(run(&["ring", "pairing", "--nde", "2,3,1", "--q", "0"]).0, 2);
    assert_eq!(run(&["ring", "dims", "--nde", "2,3,1", "--degree-cap", "1"]).0, 2);
}

#[test]
fn every_command_exits_zero_on_passing_input() {
    let inst = fixture("cubic_line.json");
    let inst = path_str(&inst);
    for args in [
        vec!["ring", "dims", "--instance", inst],
        vec!["ring", "pairing", "--instance", inst],
        vec!["ring", "calibrate", "--instance", inst],
        vec!["oracle", "compare", "--instance", inst],
        vec!["criteria", "scan", "--criterion", "consmac", "--n", "2", "--d", "3", "--e", "1", "--l", "0:1", "--l2", "-1:1"],
        vec!["criteria", "scan", "--criterion", "loci", "--n", "2:3", "--d", "3:4", "--e", "1:2"],
        vec!["vanishing", "--n", "3", "--m", "1", "--k", "2"],
        vec!["duality", "--m", "2", "--k", "1"],
    ] {
        let (code, _, err) = run(&args);
        assert_eq!(code, 0, "{args:?}: {err}");
    }
}

#[test]
fn explicit_pair_calibrates() {
    let inst = fixture("fermat_cubic_curve.json");
    let (code, out, _) = run(&["ring", "calibrate", "--instance", path_str(&inst)]);
    assert_eq!(code, 0);
    assert!(out.contains("passing:") && out.contains("PlusFNuG"));
}

#[test]
fn json_reports_are_byte_identical() {
    let dir = tempdir().unwrap();
    let inst = fixture("cubic_line.json");
    let mut reports = Vec::new();
    for (i, cache) in ["a", "a", "b"].iter().enumerate() {
        let json = dir.path().join(format!("r{i}.json"));
        let cache = dir.path().join(cache);
        let (code, out, _) = run(&[
            "ring",
            "dims",
            "--instance",
            path_str(&inst),
            "--json",
            path_str(&json),
            "--cache-dir",
            path_str(&cache),
        ]);
        assert_eq!(code, 0);
        assert!(out.is_empty());
        reports.push(std::fs::read(&json).unwrap());
    }
    // cold cache, warm cache, fresh cache
    assert_eq!(reports[0], reports[1]);
    assert_eq!(reports[0], reports[2]);
    let v: serde_json::Value = serde_json::from_slice(&reports[0]).unwrap();
    assert_eq!(v["echo"]["variant"], "PlusFNuG");
    assert_eq!(v["echo"]["seed"], 1);
    assert!(v.get("timestamp").is_none());
}

#[test]
fn dims_populate_the_cache() {
    let dir = tempdir().unwrap();
    let inst = fixture("cubic_line.json");
    let (code, _, _) = run(&["ring", "dims", "--instance", path_str(&inst), "--cache-dir", path_str(dir.path())]);
    assert_eq!(code, 0);
    let spec = InstanceSpec::load(&inst).unwrap();
    let cache = Cache::open(dir.path()).unwrap();
    let entry = cache.get(&spec.content_hash(), SliceKey::new(1, 1)).unwrap();
    assert_eq!((entry.dim, entry.rank), (1, 20));
    let files = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(files, 4);
}

#[test]
fn stale_cache_entries_are_recomputed() {
    let dir = tempdir().unwrap();
    let inst = fixture("cubic_line.json");
    let hash = InstanceSpec::load(&inst).unwrap().content_hash();
    let old = Cache::with_version(dir.path(), "0.0.0-old").unwrap();
    old.put(&CacheEntry { engine_version: "0.0.0-old".into(), ..CacheEntry::new(&hash, SliceKey::new(0, 1), 99, 0) })
        .unwrap();
    let (code, out, _) = run(&["ring", "dims", "--instance", path_str(&inst), "--cache-dir", path_str(dir.path())]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["0", "1", "3", "0", "3"]), "{out}");
}

#[test]
fn cache_put_then_get() {
    let dir = tempdir().unwrap();
    let cache = Cache::open(dir.path()).unwrap();
    let entry = CacheEntry::new("abc", SliceKey::new(1, -2), 4, 7);
    cache.put(&entry).unwrap();
    assert_eq!(cache.get("abc", SliceKey::new(1, -2)), Some(entry));
    assert_eq!(cache.get("abc", SliceKey::new(1, 2)), None);
    assert_eq!(cache.get("abd", SliceKey::new(1, -2)), None);
}

#[test]
fn version_bump_is_a_miss() {
    let dir = tempdir().unwrap();
    let cache = Cache::open(dir.path()).unwrap();
    cache.put(&CacheEntry::new("abc", SliceKey::new(0, 0), 1, 0)).unwrap();
    let bumped = Cache::with_version(dir.path(), "999.0.0").unwrap();
    assert_eq!(bumped.get("abc", SliceKey::new(0, 0)), None);
}

#[test]
fn corrupt_entry_is_a_miss() {
    let dir = tempdir().unwrap();
    let cache = Cache::open(dir.path()).unwrap();
    std::fs::write(cache.path("abc", SliceKey::new(0, 0)), b"{ not json").unwrap();
    assert_eq!(cache.get("abc", SliceKey::new(0, 0)), None);
}

#[test]
fn concurrent_identical_puts() {
    let dir = tempdir().unwrap();
    let cache = Cache::open(dir.path()).unwrap();
    let entry = CacheEntry::new("abc", SliceKey::new(1, 1), 3, 18);
    let bytes = serde_json::to_vec_pretty(&entry).unwrap();
    std::thread::scope(|s| {
        for _ in 0..8 {
            s.spawn(|| {
                for _ in 0..20 {
                    cache.put(&entry).unwrap();
                    if let Some(got) = cache.get("abc", SliceKey::new(1, 1)) {
                        assert_eq!(got, entry);
                    }
                }
            });
        }
    });
    assert_eq!(std::fs::read(cache.path("abc", SliceKey::new(1, 1))).unwrap(), bytes);
    let leftovers = std::fs::read_dir(dir.path()).unwrap().filter(|e| {
        e.as_ref().unwrap().file_name().to_string_lossy().ends_with(".tmp")
    });
    assert_eq!(leftovers.count(), 0);
}

#[test]
fn hash_ignores_degree_cap_only() {
    let base = InstanceSpec::generic(2, 3, 1, 1);
    let capped = InstanceSpec { degree_cap: Some(10), ..base.clone() };
    assert_eq!(base.content_hash(), capped.content_hash());
    let other = InstanceSpec { variant: GeneratorVariant::PlusW, ..base.clone() };
    assert_ne!(base.content_hash(), other.content_hash());
    let fp = InstanceSpec { field: FieldKind::Fp(1_000_003), ..base.clone() };
    assert_ne!(base.content_hash(), fp.content_hash());
    assert_ne!(base.content_hash(), InstanceSpec::generic(2, 3, 1, 2).content_hash());
}

#[test]
fn explicit_degree_mismatch_is_reported() {
    let mut spec = InstanceSpec::load(&fixture("fermat_cubic_curve.json")).unwrap();
    spec.d = Some(4);
    let err = spec.build().err().expect("degree mismatch");
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("field `d`"));
}

fn field_kind() -> impl Strategy<Value = FieldKind> {
    prop_oneof![Just(FieldKind::Q), Just(FieldKind::Qi), Just(FieldKind::Fp(1_000_003)), Just(FieldKind::Fp(7))]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn instance_specs_round_trip(
        n in 2usize..5,
        d in 1u32..5,
        e in 1u32..4,
        seed in any::<u64>(),
        field in field_kind(),
        variant in prop::sample::select(GeneratorVariant::ALL.to_vec()),
        cap in prop::option::of(1u32..60),
    ) {
        let spec = InstanceSpec { field, variant, degree_cap: cap, ..InstanceSpec::generic(n, d, e, seed) };
        let text = serde_json::to_string(&spec).unwrap();
        let back: InstanceSpec = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &spec);
        prop_assert_eq!(back.content_hash(), spec.content_hash());
    }

    #[test]
    fn explicit_records_round_trip(seed in 0u64..1000) {
        let inst = logjac::RingInstance::generic(logjac::Rationals, 2, 3, 2, GeneratorVariant::default(), seed).unwrap();
        let spec = InstanceSpec {
            coefficients: Coefficients::Explicit { f: inst.f().to_records(), g: inst.g().to_records() },
            ..InstanceSpec::generic(2, 3, 2, seed)
        };
        let back: InstanceSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        prop_assert_eq!(&back, &spec);
        let logjac_cli::AnyInstance::Q(rebuilt) = back.build().unwrap() else { panic!("field Q") };
        prop_assert_eq!(rebuilt.f(), inst.f());
        prop_assert_eq!(rebuilt.g(), inst.g());
    }
}
