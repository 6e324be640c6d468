macro_rules! example {
    ($name:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(permanent_engines, "permanent_engines.rs");
example!(correlation_matrices, "correlation_matrices.rs");
example!(imported_theorems, "imported_theorems.rs");
example!(chollet_check, "chollet_check.rs");
example!(proof_trace, "proof_trace.rs");
example!(exact_trace, "exact_trace.rs");
example!(extremal_search, "extremal_search.rs");
example!(matrix_files, "matrix_files.rs");

#[test]
fn permanent_engines_runs() {
    permanent_engines::run_example().expect("permanent engines example should run");
}

#[test]
fn correlation_matrices_runs() {
    correlation_matrices::run_example().expect("correlation example should run");
}

#[test]
fn imported_theorems_runs() {
    imported_theorems::run_example().expect("imported theorems example should run");
}

#[test]
fn chollet_check_runs() {
    chollet_check::run_example().expect("chollet check example should run");
}

#[test]
fn proof_trace_runs() {
    proof_trace::run_example().expect("proof trace example should run");
}

#[test]
fn exact_trace_runs() {
    exact_trace::run_example().expect("exact trace example should run");
}

#[test]
fn extremal_search_runs() {
    extremal_search::run_example().expect("search example should run");
}

#[test]
fn matrix_files_runs() {
    matrix_files::run_example().expect("matrix file example should run");
}
