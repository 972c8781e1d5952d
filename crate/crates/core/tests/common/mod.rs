#![allow(dead_code)]

use std::path::PathBuf;

use cfr_core::designs::{CoveringDesign, DesignParams};
use cfr_core::skipcost::CfrArray;

pub fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

/// `c{t}_{k}_{v}.txt` from the design corpus.
pub fn design(t: u32, k: u32, v: u32) -> CoveringDesign {
    let params = DesignParams::new(t, k, v).unwrap();
    CoveringDesign::from_path(data(&format!("designs/c{t}_{k}_{v}.txt")), params).unwrap()
}

/// Every design in the corpus, ordered by `(t, k, v)`.
pub fn corpus() -> Vec<CoveringDesign> {
    let mut out: Vec<CoveringDesign> = std::fs::read_dir(data("designs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|path| {
            let stem = path.file_stem().unwrap().to_str().unwrap().to_string();
            let n: Vec<u32> = stem.trim_start_matches('c').split('_').map(|x| x.parse().unwrap()).collect();
            CoveringDesign::from_path(&path, DesignParams::new(n[0], n[1], n[2]).unwrap()).unwrap()
        })
        .collect();
    out.sort_by_key(|d| {
        let p = d.params();
        (p.t(), p.k(), p.v())
    });
    out
}

pub fn array(name: &str) -> CfrArray {
    CfrArray::from_path(data(&format!("arrays/{name}.txt"))).unwrap()
}

/// The array's columns as sorted blocks.
pub fn column_sets(a: &CfrArray) -> Vec<Vec<u32>> {
    (0..a.len()).map(|j| a.column_set(j)).collect()
}

pub fn as_design(a: &CfrArray, params: DesignParams) -> CoveringDesign {
    let text: String = a.columns().map(|c| c.iter().map(u32::to_string).collect::<Vec<_>>().join(" ") + "\n").collect();
    CoveringDesign::parse(&text, params).unwrap()
}

/// Prints the one-line verdict and fails the test on FAIL. Writes to the
/// process stdout directly so the line survives the harness's capture.
pub fn verdict(criterion: u32, title: &str, ok: bool, detail: &str) {
    use std::io::Write;
    let line = format!("criterion {criterion}: {} - {title}: {detail}\n", if ok { "PASS" } else { "FAIL" });
    std::io::stdout().lock().write_all(line.as_bytes()).unwrap();
    assert!(ok, "criterion {criterion} failed: {detail}");
}
