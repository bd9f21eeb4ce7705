use mosaic_core::cli;
use mosaic_core::zonotope::Zonotope;
use serde_json::Value;

fn run(args: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("mosaic").chain(args.split_whitespace());
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn report(args: &str) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn wm_picks_truncated_octahedron_at_unit_weights() {
    let v = report("wm --alpha6 1 --alpha4 1");
    assert_eq!(v["schema"], "1");
    assert_eq!(v["pass"], true);
    let per_type = v["outputs"]["per_type"].as_array().unwrap();
    assert_eq!(per_type.len(), 5);
    let w5 = 3.0 / 2f64.powf(1.0 / 6.0);
    assert!((per_type[4]["value"].as_f64().unwrap() - w5).abs() < 1e-12);
    assert!(v["outputs"].to_string().contains("TruncOcta"));
}

#[test]
fn wm_single_type() {
    let v = report("wm --alpha6 1 --alpha4 1 --type 1");
    assert!(v["outputs"].to_string().contains("3.0"));
}

#[test]
fn decomp_three_dimensions() {
    let v = report("decomp --dim 3");
    let min = v["outputs"]["minimum"].as_f64().unwrap();
    assert!((min - 3.0 * 3f64.sqrt() / 2.0).abs() < 1e-12);
    let l = v["outputs"]["segment_length"].as_f64().unwrap();
    assert!((l - 3f64.sqrt()).abs() < 1e-12);
}

#[test]
fn decomp_curve_is_csv() {
    let (code, out, _) = run("decomp --dim 4 --curve 5");
    assert_eq!(code, 0);
    assert!(out.starts_with("e_hat,bound\n"));
    assert_eq!(out.lines().count(), 6);
}

#[test]
fn tile_cube_reaches_density_two() {
    let v = report("tile --shape cube --radius 12 --covering-samples 20000");
    let row = &v["outputs"]["rows"][0];
    assert!(row["relative_error"].as_f64().unwrap() < 0.02);
    assert_eq!(row["census"]["mismatched"], 0);
}

#[test]
fn tile_accepts_zonotope_document() {
    let z = Zonotope::truncated_octahedron(2f64.powf(-7.0 / 6.0)).unwrap();
    let path = std::env::temp_dir().join(format!("mosaic-cli-{}.json", std::process::id()));
    std::fs::write(&path, z.to_json()).unwrap();
    let v = report(&format!("tile --shape file:{} --radius 10 --covering-samples 20000", path.display()));
    std::fs::remove_file(&path).ok();
    assert_eq!(v["pass"], true);
}

#[test]
fn reports_are_deterministic() {
    for args in ["wm --alpha6 1 --alpha4 0.5 --sweep 200 --seed 3", "verify --lemma tetra --samples 50 --seed 9"] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.0, 0);
        assert_eq!(a, b, "{args}");
    }
}

#[test]
fn csv_commands() {
    let (code, out, _) = run("table1");
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("type,value,bound,shape"));
    assert_eq!(out.lines().count(), 6);
    let (code, out, _) = run("fig2 --step 0.25 --max 1");
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("alpha4,w1,w2,w4,w5"));
    assert_eq!(out.lines().count(), 5);
}

#[test]
fn exit_codes() {
    assert_eq!(run("frobnicate").0, 2);
    assert_eq!(run("wm --alpha6 1").0, 2);
    let (code, _, err) = run("wm --alpha6=-1 --alpha4 1");
    assert_eq!(code, 1);
    assert!(err.starts_with("error:"));
    assert_eq!(run("tile --shape dodecagon").0, 1);
    assert_eq!(run("fig2 --step 0").0, 1);
    assert_eq!(run("--help").0, 0);
}
