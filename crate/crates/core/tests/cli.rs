use hoalg::format::{self, Structure};
use hoalg::scalar::q;
use hoalg::{Element, Operations, Truncation};

fn run(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut input = stdin.as_bytes();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["hoalg"];
    argv.extend_from_slice(args);
    let code = hoalg::cli::run(argv, &mut input, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn ok(args: &[&str], stdin: &str) -> String {
    let (code, out, err) = run(args, stdin);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

#[test]
fn envelope_pipeline_verifies_and_reloads() {
    let cp2 = ok(&["example", "cpk", "2"], "");
    let env = ok(&["envelope", "-", "--max-degree", "6"], &cp2);
    assert!(env.contains("m3(x,x,x) = 1/36 y"), "{env}");
    ok(&["verify", "-"], &env);
    let file = format::parse(&env).unwrap();
    assert_eq!(format::parse(&file.dump()).unwrap(), file);
    let prim = ok(&["antisymmetrize", "-"], &env);
    assert!(prim.contains("l3(x,x,x) = 1/6 y"), "{prim}");
}

#[test]
fn output_is_deterministic() {
    let s2 = ok(&["example", "even_sphere", "2"], "");
    let a = ok(&["envelope", "-", "--max-degree", "8"], &s2);
    let b = ok(&["envelope", "-", "--max-degree", "8"], &s2);
    assert_eq!(a, b);
    let Structure::Assoc(m) = format::parse(&a).unwrap().structure else {
        panic!("envelope must be associative: {a}");
    };
    let x = Element::basis(m.space().require("x").unwrap());
    let y = Element::basis(m.space().require("y").unwrap());
    assert_eq!(m.op(2, &[&x, &x]).unwrap(), y.scaled(&q(1, 2)));
}

#[test]
fn flags_override_the_file_truncation() {
    let cp2 = ok(&["example", "cpk", "2"], "");
    let file = cp2.replacen("basis x:1", "truncation 7 4 6\nbasis x:1", 1);
    let from_file = ok(&["envelope", "-"], &file);
    assert!(from_file.contains("truncation 7 4 6"), "{from_file}");
    let from_flags = ok(&["envelope", "-", "--max-degree", "6", "--max-arity", "3"], &file);
    assert!(from_flags.contains("truncation 6 3 6"), "{from_flags}");
}

#[test]
fn sullivan_and_quillen_commands() {
    let cp2 = ok(&["example", "cpk", "2"], "");
    let s = ok(&["sullivan", "-", "--max-degree", "5"], &cp2);
    assert!(s.contains("d(v_y) = -1/36 v_x.v_x.v_x"), "{s}");
    let qm = ok(&["quillen", "-", "--max-degree", "9"], &cp2);
    assert!(qm.contains("1:1") && qm.contains("4:1"), "{qm}");
}

#[test]
fn whitehead_certificate_for_cp2() {
    let cp2 = ok(&["example", "cpk", "2"], "");
    let out = ok(&["certify-whitehead", "-", "--tuple", "x,x,x", "--max-degree", "6"], &cp2);
    assert!(out.contains("verdict equal"), "{out}");
}

#[test]
fn corrupted_structure_fails_verification() {
    let cp2 = ok(&["example", "cpk", "2"], "");
    let env = ok(&["envelope", "-"], &cp2);
    ok(&["verify", "-"], &env);
    let bad = env.replace("m3(x,x,x) = 1/36 y", "m3(x,x,x) = 1/35 y");
    let (code, out, err) = run(&["verify", "-"], &bad);
    assert_eq!(code, 1, "{out}{err}");
    assert!(out.contains("(x,x,x,y)"), "{out}");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["frobnicate"], "").0, 2);
    assert_eq!(run(&["verify", "/nonexistent/file.alg"], "").0, 2);
    assert_eq!(run(&["verify", "-"], "kind linf\nbasis x:1\nl2(x,z) = x\n").0, 2);
    assert_eq!(run(&["verify", "-"], "kind linf\nbasis x 1\n").0, 2);
    assert_eq!(run(&["example", "cpk", "0"], "").0, 2);
    assert_eq!(run(&["envelope", "-", "--max-arity", "0"], "kind linf\nbasis x:1\n").0, 2);
    let err = run(&["verify", "-"], "kind linf\nbasis x:1\nl2(x,x) = q x\n").2;
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn transfer_of_a_dga_to_its_homology() {
    // a ⊗ k[e]/e² with d e = a: acyclic, so the transfer is zero
    let text = "kind dga\nbasis a:1\nbasis e:2\nm1(e) = a\n";
    let out = ok(&["transfer", "-"], text);
    let file = format::load(&out, &Truncation::new(12, 5, 8).unwrap()).unwrap();
    assert_eq!(file.structure.space().dim(), 0, "{out}");
}
