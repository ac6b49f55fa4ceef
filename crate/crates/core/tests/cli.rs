//! End-to-end checks of the `bestround` binary.

use std::process::{Command, Output};

use bestround::cli::{from_csv, to_csv, EdoRecord, OutputRecord, PlotRecord};

fn bestround(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bestround"))
        .args(args)
        .env_remove("BESTROUND_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = bestround(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(bestround(&["expand", "--const", "pi"]).status.code(), Some(0));
    assert_eq!(bestround(&["expand", "--ratio", "3/0"]).status.code(), Some(2));
    assert_eq!(bestround(&["expand", "--const", "phi"]).status.code(), Some(2));
    assert_eq!(bestround(&["expand", "--value", "-1.5"]).status.code(), Some(2));
    assert_eq!(bestround(&["array", "--max-denom", "0"]).status.code(), Some(2));
    assert_eq!(bestround(&["array", "--max-denom", "5", "--precision", "10"]).status.code(), Some(2));
    assert_eq!(bestround(&["categorize", "--start", "12", "--end", "99999999999"]).status.code(), Some(2));
    assert_eq!(bestround(&["bogus"]).status.code(), Some(2));
    let out = bestround(&["expand", "--const", "e", "--terms", "100000"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("last stable term index"));
}

#[test]
fn precision_raise_goes_to_stderr() {
    let out = bestround(&["array", "--max-denom", "200000", "--precision", "30", "--format", "csv"]);
    assert!(out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("raising precision from 30 to 32"), "{err}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 200_001);
    assert!(!text.contains("note:"));
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_bestround"))
        .args(["array", "--max-denom", "5"])
        .env("BESTROUND_PRECISION", "12")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_bestround"))
        .args(["expand", "--const", "pi", "--terms", "12"])
        .env("BESTROUND_PRECISION", "200")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn deterministic_output() {
    for args in [
        &["array", "--const", "sqrt2", "--max-denom", "300", "--format", "json"][..],
        &["edo", "--window", "12:41"],
        &["plot-data", "--const", "e", "--max-denom", "50"],
    ] {
        assert_eq!(stdout(args), stdout(args));
    }
}

#[test]
fn csv_round_trips() {
    let text = stdout(&["array", "--const", "e", "--max-denom", "100", "--format", "csv"]);
    let rows: Vec<OutputRecord> = from_csv(&text).unwrap();
    assert_eq!(rows.len(), 100);
    assert_eq!(to_csv(&rows).unwrap(), text);

    let text = stdout(&["edo", "--window", "12:41", "--format", "csv"]);
    let rows: Vec<EdoRecord> = from_csv(&text).unwrap();
    assert_eq!(rows.len(), 30);
    assert_eq!(to_csv(&rows).unwrap(), text);

    let text = stdout(&["plot-data", "--const", "beta", "--max-denom", "41"]);
    let rows: Vec<PlotRecord> = from_csv(&text).unwrap();
    assert_eq!(rows.len(), 41);
    assert_eq!(to_csv(&rows).unwrap(), text);
}

#[test]
fn plot_data_for_pi() {
    let rows: Vec<PlotRecord> = from_csv(&stdout(&["plot-data", "--const", "pi", "--max-denom", "9"])).unwrap();
    let class = |m: u64| rows.iter().find(|r| r.denominator == m).unwrap().class.clone();
    assert_eq!(rows.len(), 9);
    assert_eq!(class(7), "c");
    assert_eq!(class(8), "nc");
    assert_eq!(class(9), "nc");
}

#[test]
fn edo_default_window_and_ranking() {
    let rows: Vec<EdoRecord> = from_csv(&stdout(&["edo", "--format", "csv"])).unwrap();
    let top: Vec<u64> = rows.iter().take(3).map(|r| r.divisions).collect();
    assert_eq!(top, [41, 29, 12]);
    let best_nc = rows.iter().find(|r| r.nu == "1").unwrap();
    assert_eq!((best_nc.divisions, best_nc.steps), (17, 10));

    let third: Vec<EdoRecord> =
        from_csv(&stdout(&["edo", "--interval", "log2:5/4", "--format", "csv"])).unwrap();
    assert_eq!(third.len(), 26);
    assert_eq!(third[0].divisions, 28);
}

#[test]
fn categorize_views() {
    let two = stdout(&["categorize", "--start", "12", "--end", "13", "--format", "csv"]);
    assert_eq!(two.lines().count(), 3);
    let by_tau: Vec<OutputRecord> =
        from_csv(&stdout(&["categorize", "--start", "12", "--end", "41", "--format", "csv", "--by-tau"])).unwrap();
    assert_eq!(by_tau[0].denominator, 41);
    let table = stdout(&["categorize", "--start", "12", "--end", "41"]);
    assert!(table.contains("⟨4|2, 1⟩"));
    assert!(table.lines().next().unwrap().starts_with("Denominator"));
}

#[test]
fn comma_decimal_input() {
    assert_eq!(stdout(&["expand", "--value", "0,5849625007211", "--terms", "9"]), "[0; 1, 1, 2, 2, 3, 1, 5, 2]\n");
}
