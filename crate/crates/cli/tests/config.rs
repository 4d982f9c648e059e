use std::path::PathBuf;

use tormod_cli::config::{parse_config, parse_config_str};
use tormod_cli::CliError;

fn configs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn config_error(text: &str) -> String {
    match parse_config_str(text) {
        Err(CliError::Config(msg)) => msg,
        Err(other) => panic!("expected a config error, got {other:?}"),
        Ok(_) => panic!("config unexpectedly accepted"),
    }
}

const O2_HEAD: &str = r#"
[group]
builtin = "Z2"

[ring]
generators = ["c"]
degrees = [-2]

[ring.action]
w = [["-1"]]
"#;

#[test]
fn every_bundled_config_parses() {
    let mut n = 0;
    for entry in std::fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "cfg") {
            parse_config(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            n += 1;
        }
    }
    assert!(n >= 8);
}

#[test]
fn o2_session_contents() {
    let s = parse_config(&configs_dir().join("o2.cfg")).unwrap();
    assert_eq!(s.ring.group().order(), 2);
    assert_eq!(s.ring.nvars(), 1);
    assert_eq!(s.ext, Some(("QW".into(), "QW".into())));
    assert_eq!((s.window.t_min, s.window.t_max, s.window.margin), (-10, 10, 4));
    assert!(s.module("QW").is_ok());
    assert!(s.module("nope").is_err());
}

#[test]
fn odd_generator_degree_is_rejected() {
    let msg = config_error(&O2_HEAD.replace("degrees = [-2]", "degrees = [-3]"));
    assert!(msg.contains("[ring]"), "{msg}");
}

#[test]
fn empty_file_is_a_syntax_error() {
    assert!(config_error("").contains("syntax"));
    assert!(config_error("  \n").contains("syntax"));
}

#[test]
fn unknown_keys_are_rejected() {
    let msg = config_error(&format!("{O2_HEAD}\n[window]\nt_min = 0\nt_max = 1\nwidth = 3\n"));
    assert!(msg.contains("width"), "{msg}");
}

#[test]
fn decimal_matrix_entries_are_rejected() {
    let msg = config_error(&O2_HEAD.replace(r#"w = [["-1"]]"#, "w = [[-1.0]]"));
    assert!(msg.contains("decimal"), "{msg}");
    assert!(config_error(&O2_HEAD.replace(r#""-1""#, r#""-0.5""#)).contains("[ring]"));
}

#[test]
fn rational_strings_with_unicode_minus_are_accepted() {
    assert!(parse_config_str(&O2_HEAD.replace(r#""-1""#, "\"\u{2212}1\"")).is_ok());
}

#[test]
fn non_homomorphic_action_is_rejected() {
    let msg = config_error(&O2_HEAD.replace(r#"w = [["-1"]]"#, r#"w = [["2"]]"#));
    assert!(msg.contains("[ring] action"), "{msg}");
}

#[test]
fn group_tables_are_validated() {
    let bad = r#"
[group]
elements = ["e", "a"]
table = [["e", "a"], ["a", "a"]]

[ring]
generators = ["x"]
degrees = [-2]
"#;
    assert!(config_error(bad).contains("[group]"));
    let unknown = bad.replace(r#"["a", "a"]"#, r#"["a", "z"]"#);
    assert!(config_error(&unknown).contains("\"z\""));
}

#[test]
fn modules_are_validated_by_name() {
    let inhomogeneous = format!(
        "{O2_HEAD}\n[[module]]\nname = \"bad\"\ngenerators = [{{ name = \"u\", degree = 0 }}]\nrelations = [\"c*u + c^2*u\"]\n"
    );
    assert!(config_error(&inhomogeneous).contains("module \"bad\""));
    let dangling = format!("{O2_HEAD}\n[ext]\nsource = \"QW\"\ntarget = \"QW\"\n");
    assert!(config_error(&dangling).contains("QW"));
    let duplicate = format!(
        "{O2_HEAD}\n[[module]]\nname = \"A\"\nbuiltin = \"zero\"\n\n[[module]]\nname = \"A\"\nbuiltin = \"zero\"\n"
    );
    assert!(config_error(&duplicate).contains("duplicate"));
}

#[test]
fn explicit_dga_is_validated() {
    let text = std::fs::read_to_string(configs_dir().join("explicit_formal.cfg")).unwrap();
    assert!(parse_config_str(&text).unwrap().dga.is_some());
    // c*c landing on zero breaks nothing, but a non-equivariant product does.
    let bad = text.replace(r#"w = ["c -> -c"]"#, r#"w = ["c -> -c", "c2 -> -c2"]"#);
    let msg = config_error(&bad);
    assert!(msg.contains("[dga]"), "{msg}");
    let missing_unit = text.replace(r#"basis = [["1"],"#, r#"basis = [["one"],"#);
    assert!(config_error(&missing_unit).contains("degree 0"));
}

#[test]
fn bad_differential_in_free_dga_is_rejected() {
    let text = std::fs::read_to_string(configs_dir().join("c1.cfg")).unwrap();
    let bad = text.replace(r#"d = "b""#, r#"d = "c""#);
    let msg = config_error(&bad);
    assert!(msg.contains("[dga]"), "{msg}");
}
