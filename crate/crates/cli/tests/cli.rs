use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use probmet_cli::format::{parse_map, parse_metric, parse_space, SpaceFile};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn probmet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_probmet"))
        .current_dir(fixtures())
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[track_caller]
fn expect(args: &[&str], code: i32, needle: &str) -> Output {
    let o = probmet(args);
    let all = format!("{}{}", stdout(&o), stderr(&o));
    assert_eq!(o.status.code(), Some(code), "{args:?}\n{all}");
    assert!(all.contains(needle), "{args:?}: `{needle}` not in\n{all}");
    o
}

#[test]
fn verify_reports_verdicts_and_witnesses() {
    expect(&["verify", "two_point.json"], 0, "all axioms pass");
    expect(&["verify", "three_min_steps.ddf.json"], 0, "axiom P5: pass");
    expect(&["verify", "empty.json"], 0, "all axioms pass");
    expect(&["verify", "single.json"], 0, "all axioms pass");
    expect(&["verify", "pseudo_four.json"], 0, "axiom UH: n/a");
    expect(&["verify", "ut_violation.json"], 1, "witness UT x=x y=y z=z");
    expect(&["verify", "uh_violation.json"], 1, "witness UH x=a y=b");
    expect(&["verify", "p5_violation.ddf.json"], 1, "witness P5 x=x y=y z=z");
}

#[test]
fn input_errors_exit_2_with_field_paths() {
    expect(&["verify", "decimal.json"], 2, "dist.\"a|b\"[0][0]: `0.5`: rationals only");
    expect(&["verify", "json_number.json"], 2, "rationals only");
    expect(&["verify", "non_monotone.json"], 2, "UD canonical form");
    expect(&["verify", "missing_pair.json"], 2, "missing pair \"a|c\"");
    expect(&["verify", "pair_twice.json"], 2, "pair given twice");
    expect(&["verify", "duplicate_point.json"], 2, "points[1]: duplicate point id");
    expect(&["verify", "unknown_tnorm.json"], 2, "tnorm:");
    expect(&["verify", "endpoint_not_one.json"], 2, "must be 1");
    expect(&["verify", "ddf_not_increasing.json"], 2, "strictly increasing");
    expect(&["verify", "malformed.json"], 2, "line 2");
    expect(&["verify", "metric_triangle.json"], 2, "metric file");
    expect(&["verify", "no_such_file.json"], 2, "no_such_file.json");
    expect(&["convert", "two_point.json", "--to", "levels", "--tnorm", "min"], 2, "--tnorm");
    expect(&["convert", "two_point.json", "--to", "metric"], 2, "metric");
}

#[test]
fn convert_round_trips_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["two_point.json", "reversed_keys.json", "three_min_steps.ddf.json", "infinite_lukasiewicz.json", "empty.json"] {
        let first = dir.path().join("first.json");
        let ddf = dir.path().join("ddf.json");
        let back = dir.path().join("back.json");
        let run = |args: &[&str]| assert_eq!(probmet(args).status.code(), Some(0), "{args:?}");
        run(&["convert", name, "--to", "levels", "--out", first.to_str().unwrap()]);
        run(&["convert", first.to_str().unwrap(), "--to", "ddf", "--out", ddf.to_str().unwrap()]);
        run(&["convert", ddf.to_str().unwrap(), "--to", "levels", "--out", back.to_str().unwrap()]);
        assert_eq!(fs::read(&first).unwrap(), fs::read(&back).unwrap(), "{name}");
    }
    // already canonical files are reproduced exactly
    let o = expect(&["convert", "three_min_steps.ddf.json", "--to", "ddf"], 0, "\"form\": \"ddf\"");
    assert_eq!(stdout(&o), fs::read_to_string(fixtures().join("three_min_steps.ddf.json")).unwrap());
    expect(&["convert", "ut_violation.json", "--to", "ddf"], 1, "witness UT");
}

#[test]
fn closure_and_witness() {
    expect(&["closure", "pseudo_four.json", "--set", "a"], 0, "closure: a,b\n");
    expect(&["closure", "pseudo_four.json", "--set", "c,d"], 0, "closure: c,d\n");
    expect(&["closure", "three_product.json", "--set", ""], 0, "closure: \n");
    expect(&["closure", "pseudo_four.json", "--set", "a,zz"], 2, "unknown point `zz`");
    expect(&["closure", "ut_violation.json", "--set", "x"], 2, "fails the axioms");

    expect(&["witness", "pseudo_four.json", "--set", "a", "--point", "b"], 1, "lies in the closure");
    expect(&["witness", "pseudo_four.json", "--set", "a", "--point", "q"], 2, "--point");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cospan");
    expect(
        &["witness", "pseudo_four.json", "--set", "a", "--point", "c", "--out", out.to_str().unwrap()],
        0,
        "u(c) = c, v(c) = ⊥",
    );
    let SpaceFile::Levels(z) = parse_space(&fs::read_to_string(out.join("Z.json")).unwrap()).unwrap() else {
        panic!("Z is written in levels form")
    };
    assert!(probmet::validate_level_space(&z).passed());
    let SpaceFile::Levels(y) = parse_space(&fs::read_to_string(fixtures().join("pseudo_four.json")).unwrap()).unwrap() else {
        panic!()
    };
    for name in ["u.json", "v.json"] {
        let f = parse_map(&fs::read_to_string(out.join(name)).unwrap(), y.points(), z.points()).unwrap();
        assert!(probmet::is_nonexpansive(&f, &y, &z).unwrap().passed(), "{name}");
    }
}

#[test]
fn classify_maps() {
    expect(
        &["classify", "two_point.json", "three_product.json", "--map", "map_two_into_three.json"],
        0,
        "epi: no\nmono: yes\nregular-mono: no\n",
    );
    expect(&["classify", "--map", "map_dense.json"], 0, "epi: yes\nmono: yes\nregular-mono: yes\n");
    expect(&["classify", "--map", "map_expanding.json"], 1, "witness nonexpansive x=x y=y");
    expect(
        &["classify", "two_point.json", "three_product.json", "--map", "map_incomplete.json"],
        2,
        "`b` has no image",
    );
    expect(&["classify", "--map", "map_two_into_three.json"], 2, "source: missing field");
    expect(
        &["classify", "two_point.json", "three_min_steps.json", "--map", "map_two_into_three.json"],
        2,
        "unknown target point",
    );
}

#[test]
fn constructions_write_valid_files() {
    let o = expect(&["lift", "lift.json"], 0, "\"s|u\": [[\"1\", \"3\"]]");
    let SpaceFile::Levels(lift) = parse_space(&stdout(&o)).unwrap() else { panic!() };
    assert!(probmet::validate_level_space(&lift).passed());
    expect(&["lift", "lift_tnorm_mismatch.json"], 2, "t-norm mismatch");

    let o = expect(&["product", "two_point.json", "three_product.json"], 0, "(b;z)");
    let SpaceFile::Levels(p) = parse_space(&stdout(&o)).unwrap() else { panic!() };
    assert_eq!(p.len(), 6);
    assert!(probmet::validate_level_space(&p).passed());
    expect(&["product", "two_point.json", "three_min_steps.json"], 2, "t-norm mismatch");

    let o = expect(&["coreflect", "three_min_steps.ddf.json"], 0, "\"p|r\": \"8\"");
    parse_metric(&stdout(&o)).unwrap();
    let o = expect(&["reflect", "pseudo_four.json"], 0, "\"points\": [\"a\", \"c\", \"d\"]");
    assert!(parse_metric(&stdout(&o)).unwrap().separated());
    expect(&["quotient", "pseudo_four.json"], 0, "\"points\": [\"a\", \"c\", \"d\"]");
    expect(&["reflect", "ut_violation.json"], 2, "fails the axioms");

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nested/q.json");
    let o = expect(&["quotient", "pseudo_four.json", "--out", out.to_str().unwrap()], 0, "");
    assert!(stdout(&o).is_empty());
    assert!(fs::read_to_string(out).unwrap().starts_with("{\n  \"form\": \"levels\""));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["product", "two_point.json", "three_product.json", "two_point.json"][..],
        &["convert", "infinite_lukasiewicz.json", "--to", "ddf"],
        &["witness", "pseudo_four.json", "--set", "a", "--point", "d"],
    ] {
        assert_eq!(probmet(args).stdout, probmet(args).stdout, "{args:?}");
    }
}

#[test]
fn metric_fixtures() {
    let text = fs::read_to_string(fixtures().join("metric_triangle.json")).unwrap();
    assert_eq!(parse_metric(&text).unwrap().len(), 3);
    let text = fs::read_to_string(fixtures().join("metric_broken.json")).unwrap();
    assert!(parse_metric(&text).unwrap_err().to_string().contains("dist"));
}
