use std::ffi::{CStr, CString};
use std::ptr;

use strandhopf::cli_io;
use strandhopf::fixtures;
use strandhopf_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let v = CStr::from_ptr(s).to_str().unwrap().to_string();
    sh_string_free(s);
    v
}

unsafe fn load(json: &str) -> *mut ShGraph {
    let mut g = ptr::null_mut();
    assert_eq!(sh_graph_from_json(cstr(json).as_ptr(), &mut g), ShStatus::Ok);
    g
}

#[test]
fn graph_round_trip_and_counts() {
    unsafe {
        let text = cli_io::graph_to_json(&fixtures::fish(false));
        let g = load(&text);
        let mut out = ptr::null_mut();
        assert_eq!(sh_graph_to_json(g, &mut out), ShStatus::Ok);
        assert_eq!(take(out), text);
        let (mut v, mut h, mut s, mut e) = (0, 0, 0, 0);
        assert_eq!(sh_graph_counts(g, &mut v, &mut h, &mut s, &mut e), ShStatus::Ok);
        assert_eq!((v, e), (2, 2));
        assert_eq!(
            sh_graph_counts(g, ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut()),
            ShStatus::Ok
        );
        let mut aut = 0u64;
        assert_eq!(sh_graph_automorphism_count(g, &mut aut), ShStatus::Ok);
        assert!(aut >= 1);
        sh_graph_free(g);
    }
}

#[test]
fn contraction_residue_and_isomorphism() {
    unsafe {
        let g = load(&cli_io::graph_to_json(&fixtures::fish(false)));
        let (mut q, mut r) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(sh_graph_contract_edges(g, cstr("e1,e2").as_ptr(), &mut q), ShStatus::Ok);
        assert_eq!(sh_graph_residue(g, &mut r), ShStatus::Ok);
        let mut same = false;
        assert_eq!(sh_graph_are_isomorphic(q, r, &mut same), ShStatus::Ok);
        assert!(same);
        let (mut c1, mut c2) = (ptr::null_mut(), ptr::null_mut());
        sh_graph_canonical_code(q, &mut c1);
        sh_graph_canonical_code(r, &mut c2);
        assert_eq!(take(c1), take(c2));
        let mut bad = ptr::null_mut();
        assert_eq!(sh_graph_contract_edges(g, cstr("e9").as_ptr(), &mut bad), ShStatus::InvalidArgument);
        assert!(!sh_last_error_message().is_null());
        let mut sk = ptr::null_mut();
        assert_eq!(sh_graph_skeleton(g, &mut sk), ShStatus::Ok);
        let mut e = 1;
        sh_graph_counts(sk, ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), &mut e);
        assert_eq!(e, 0);
        for x in [g, q, r, sk] {
            sh_graph_free(x);
        }
    }
}

#[test]
fn hopf_json() {
    unsafe {
        let g = load(&cli_io::graph_to_json(&fixtures::fish(false)));
        let mut out = ptr::null_mut();
        assert_eq!(sh_graph_coproduct_json(g, &mut out), ShStatus::Ok);
        let rows: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(rows.as_array().unwrap().len(), 3);
        let coeffs: Vec<&str> = rows.as_array().unwrap().iter().map(|r| r["coefficient"].as_str().unwrap()).collect();
        assert!(coeffs.contains(&"2"));
        assert_eq!(sh_graph_antipode_json(g, &mut out), ShStatus::Ok);
        assert!(take(out).starts_with('['));
        sh_graph_free(g);
    }
}

#[test]
fn theories() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(sh_theory_preset(cstr("gw4").as_ptr(), &mut t), ShStatus::Ok);
        let g = load(&cli_io::graph_to_json(&fixtures::matrix_fish()));
        let mut out = ptr::null_mut();
        assert_eq!(sh_superficial_degree(t, g, &mut out), ShStatus::Ok);
        assert_eq!(take(out), "0");
        assert_eq!(sh_classify_json(t, g, &mut out), ShStatus::Ok);
        assert!(take(out).contains("\"divergent\":true"));
        sh_theory_free(t);
        let doc = cli_io::theory_to_json(&strandhopf::models::Theory::bgr());
        assert_eq!(sh_theory_from_json(cstr(&doc).as_ptr(), &mut t), ShStatus::Ok);
        sh_theory_free(t);
        assert_eq!(sh_theory_preset(cstr("nope").as_ptr(), &mut t), ShStatus::InvalidArgument);
        sh_graph_free(g);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(sh_graph_from_json(ptr::null(), &mut g), ShStatus::NullPointer);
        assert_eq!(sh_graph_from_json(cstr("{").as_ptr(), &mut g), ShStatus::ParseError);
        let msg = CStr::from_ptr(sh_last_error_message()).to_str().unwrap();
        assert!(msg.contains("graph document"));
        let bad = r#"{"vertices":["v"],"half_edges":[{"id":"h","vertex":"w"}],"strands":[],"sigma1":[]}"#;
        assert_eq!(sh_graph_from_json(cstr(bad).as_ptr(), &mut g), ShStatus::InvalidGraph);
        let mut valid = true;
        assert_eq!(sh_validate_json(cstr(bad).as_ptr(), &mut valid), ShStatus::Ok);
        assert!(!valid);
        let bytes = [0xffu8, 0];
        assert_eq!(sh_graph_from_json(bytes.as_ptr() as *const _, &mut g), ShStatus::InvalidUtf8);
        let ok = load(&cli_io::graph_to_json(&fixtures::empty_vertex()));
        assert_eq!(sh_graph_to_json(ok, ptr::null_mut()), ShStatus::NullPointer);
        assert!(!sh_last_error_message().is_null());
        let mut n = 0;
        assert_eq!(sh_graph_counts(ok, &mut n, ptr::null_mut(), ptr::null_mut(), ptr::null_mut()), ShStatus::Ok);
        assert!(sh_last_error_message().is_null());
        sh_graph_free(ok);
        sh_graph_free(ptr::null_mut());
        sh_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/strandhopf.h")).unwrap();
    for f in [
        "sh_graph_from_json",
        "sh_graph_free",
        "sh_string_free",
        "sh_last_error_message",
        "sh_superficial_degree",
        "SH_STATUS_PANIC",
        "typedef struct ShGraph ShGraph",
    ] {
        assert!(header.contains(f), "missing {f}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = std::process::Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    assert!(cc.status.success());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"strandhopf.h\"\nint main(void) { ShGraph *g = 0; sh_graph_free(g); return SH_STATUS_OK; }\n",
    )
    .unwrap();
    let st = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-I", concat!(env!("CARGO_MANIFEST_DIR"), "/include")])
        .arg(&src)
        .status()
        .unwrap();
    assert!(st.success());
}
