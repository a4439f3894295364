//! The generated header declares every exported function.

#[test]
fn header_declares_exports() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let header = std::fs::read_to_string(format!("{dir}/include/catq.h")).unwrap();
    let src = std::fs::read_to_string(format!("{dir}/src/lib.rs")).unwrap();
    let names: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|r| r.split('(').next().unwrap())
        .collect();
    assert!(names.len() >= 15);
    for n in names {
        assert!(header.contains(&format!("{n}(")), "{n} missing from header");
    }
    for h in ["typedef struct CatqParams CatqParams;", "typedef struct CatqFunctor CatqFunctor;", "CATQ_STATUS_OK = 0"] {
        assert!(header.contains(h), "{h}");
    }
}
