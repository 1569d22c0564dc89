//! Every example under `examples/` runs to completion.

macro_rules! example {
    ($name:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(lpc_lsp, "lpc_lsp.rs");
example!(noise_mask, "noise_mask.rs");
example!(weighting_filters, "weighting_filters.rs");
example!(encode_decode, "encode_decode.rs");
example!(container, "container.rs");
example!(noise_shaping_csv, "noise_shaping_csv.rs");
example!(complexity_table, "complexity_table.rs");

#[test]
fn lpc_lsp_runs() {
    lpc_lsp::run_example().unwrap();
}

#[test]
fn noise_mask_runs() {
    noise_mask::run_example().unwrap();
}

#[test]
fn weighting_filters_runs() {
    weighting_filters::run_example().unwrap();
}

#[test]
fn encode_decode_runs() {
    encode_decode::run_example().unwrap();
}

#[test]
fn container_runs() {
    container::run_example().unwrap();
}

#[test]
fn noise_shaping_csv_runs() {
    let csv = noise_shaping_csv::run_example().unwrap();
    assert_eq!(csv.lines().count(), 130);
}

#[test]
fn complexity_table_runs() {
    let table = complexity_table::run_example(1).unwrap();
    let labels: Vec<&str> = table.rows.iter().map(|r| r.label).collect();
    assert_eq!(labels, ["proposed", "C1", "C2", "C3", "reference"]);
    assert_eq!(table.rows[0].cited_pesq, 4.256);
    assert_eq!(table.rows[4].cited_pesq, 4.164);
}
