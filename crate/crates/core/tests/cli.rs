use std::process::{Command, Output};

fn motzkin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_motzkin"))
        .args(args)
        .env_remove("MOTZKIN_EXACT_CEILING")
        .env_remove("MOTZKIN_MOD_CEILING")
        .output()
        .expect("run motzkin")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Rows after the header, split into cells.
fn rows(out: &Output) -> Vec<Vec<String>> {
    stdout(out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column(out: &Output, idx: usize) -> Vec<String> {
    rows(out).into_iter().map(|r| r[idx].clone()).collect()
}

#[test]
fn compute_exact_prefix() {
    let out = motzkin(&["compute", "0..10"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("n,value\n"));
    assert_eq!(
        column(&out, 1),
        ["1", "1", "2", "4", "9", "21", "51", "127", "323", "835"]
    );
}

#[test]
fn compute_residues_agree_across_engines() {
    let expected = ["1", "1", "2", "4", "1", "5", "3", "7", "3", "3", "4", "6"];
    for engine in ["sum", "holonomic", "convolution"] {
        let out = motzkin(&["compute", "0..12", "--mod", "8", "--engine", engine]);
        assert_eq!(out.status.code(), Some(0), "{engine}");
        assert_eq!(column(&out, 1), expected, "{engine}");
    }
    let out = motzkin(&["compute", "0..1", "--mod", "7"]);
    assert_eq!(column(&out, 1), ["1"]);
}

#[test]
fn compute_usage_and_resource_errors() {
    assert_eq!(motzkin(&["compute", "5..2"]).status.code(), Some(2));
    assert_eq!(motzkin(&["compute", "0..4", "--engine", "convolution"]).status.code(), Some(2));
    assert_eq!(motzkin(&["compute", "0..4", "--mod", "1"]).status.code(), Some(2));
    assert_eq!(motzkin(&["frobnicate"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_motzkin"))
        .args(["compute", "0..20", "--mod", "3"])
        .env("MOTZKIN_MOD_CEILING", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(motzkin(&["compute", "0..100001"]).status.code(), Some(3));
}

#[test]
fn classify_examples() {
    let out = motzkin(&["classify", "3", "--mod", "8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "n,modulus,class,residue,epsilon,delta,i,j,y,form\n3,8,Residue4,4,1,1,0,0,,\n"
    );

    let out = motzkin(&["classify", "9", "--mod", "5"]);
    assert_eq!(rows(&out)[0], ["9", "5", "Divisible", "0", "", "", "0", "1", "", "2"]);

    let out = motzkin(&["classify", "4", "--mod", "3"]);
    assert_eq!(rows(&out)[0][3], "0");

    let out = motzkin(&["classify", "0..12", "--mod", "2"]);
    assert_eq!(
        column(&out, 3),
        ["1", "1", "0", "0", "1", "1", "1", "1", "1", "1", "0", "0"]
    );

    let out = motzkin(&["classify", "11", "--mod", "4"]);
    assert_eq!(rows(&out)[0][2..4], ["Residue2".to_string(), "2".to_string()]);

    assert_eq!(motzkin(&["classify", "3", "--mod", "7"]).status.code(), Some(2));
}

#[test]
fn classify_accepts_huge_n() {
    // 4^40 - 1 = (4*0 + 1) 4^40 - 1, so epsilon=1, delta=1, j=39
    let n = "1208925819614629174706175";
    let out = motzkin(&["classify", n, "--mod", "8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(rows(&out)[0], [n, "8", "Residue4", "4", "1", "1", "0", "39", "", ""]);
}

#[test]
fn verify_examples() {
    for args in [["--mod", "8", "50000"], ["--mod", "3", "50000"], ["--mod", "5", "1"]] {
        let mut argv = vec!["verify"];
        argv.extend_from_slice(&args);
        let out = motzkin(&argv);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let row = &rows(&out)[0];
        assert_eq!(row[3], "0", "{args:?}");
        assert_eq!(row[4], "");
    }
    assert_eq!(motzkin(&["verify", "--mod", "9", "100"]).status.code(), Some(2));
}

#[test]
fn density_examples() {
    let out = motzkin(&["density", "div5", "--closed"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "label,limit,limit_decimal,horizon,count,ratio,abs_discrepancy,error_bound\n\
         div5,1/10,0.100000000000,,,,,\n"
    );

    let out = motzkin(&["density", "t01", "-N", "531440"]);
    let row = &rows(&out)[0];
    assert_eq!(row[0], "T01");
    assert_eq!(row[1], "0/1");
    assert_eq!(row[4], "4096");
    assert_eq!(row[5], "0.00770736113202");

    let out = motzkin(&["density", "even", "--both", "-N", "10000000"]);
    let row = &rows(&out)[0];
    assert_eq!(row[1], "1/3");
    assert!(row[6].parse::<f64>().unwrap() <= 1e-4);

    assert_eq!(motzkin(&["density", "mod7=1", "--closed"]).status.code(), Some(2));
    assert_eq!(motzkin(&["density", "even", "--closed", "--empirical"]).status.code(), Some(2));
}

#[test]
fn table_and_density_table_agree() {
    let a = motzkin(&["table"]);
    let b = motzkin(&["density", "table"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("\nmod8≡4,1/6,"));
    assert!(text.contains("\nmod3≡0,1/1,"));
    assert!(text.contains("\ndiv5 form 1,1/120,"));
}

#[test]
fn output_is_deterministic() {
    let args = ["density", "mod4=2", "-N", "500000", "--format", "jsonl"];
    let first = motzkin(&args);
    let second = motzkin(&args);
    assert_eq!(first.stdout, second.stdout);
    let line = stdout(&first);
    assert!(line.starts_with("{\"label\":\"mod4≡2\",\"limit\":\"1/6\""), "{line}");
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("values.csv");
    let out = motzkin(&["compute", "0..5", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "n,value\n0,1\n1,1\n2,2\n3,4\n4,9\n"
    );
}
