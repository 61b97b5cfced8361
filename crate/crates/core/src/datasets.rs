//! Manifest of the SNAP benchmark graphs with their published statistics.

use std::path::{Path, PathBuf};

/// Published statistics of one benchmark graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dataset {
    pub name: &'static str,
    pub url: &'static str,
    /// Name of the decompressed edge list.
    pub file_name: &'static str,
    pub nodes: usize,
    pub edges: usize,
    pub k_max: u32,
    pub k_avg: f64,
    pub d_avg: f64,
    /// Directed in the source; loaded as undirected, so edge counts differ.
    pub directed: bool,
}

macro_rules! snap {
    ($name:literal, $file:literal, $n:expr, $m:expr, $kmax:expr, $kavg:expr, $davg:expr, $dir:expr) => {
        Dataset {
            name: $name,
            url: concat!("https://snap.stanford.edu/data/", $file, ".gz"),
            file_name: $file,
            nodes: $n,
            edges: $m,
            k_max: $kmax,
            k_avg: $kavg,
            d_avg: $davg,
            directed: $dir,
        }
    };
}

pub const DATASETS: &[Dataset] = &[
    snap!(
        "roadNet-PA",
        "roadNet-PA.txt",
        1_088_092,
        1_541_898,
        3,
        1.80,
        2.83,
        false
    ),
    snap!(
        "roadNet-TX",
        "roadNet-TX.txt",
        1_379_917,
        1_921_660,
        3,
        1.79,
        2.76,
        false
    ),
    snap!(
        "roadNet-CA",
        "roadNet-CA.txt",
        1_965_206,
        2_766_607,
        3,
        1.81,
        2.81,
        false
    ),
    snap!(
        "web-NotreDame",
        "web-NotreDame.txt",
        325_729,
        1_497_134,
        155,
        4.32,
        6.69,
        true
    ),
    snap!(
        "web-Stanford",
        "web-Stanford.txt",
        281_903,
        2_312_497,
        71,
        7.91,
        14.14,
        true
    ),
    snap!(
        "web-Google",
        "web-Google.txt",
        875_713,
        5_105_039,
        44,
        5.94,
        9.43,
        true
    ),
    snap!(
        "wiki-Talk",
        "wiki-Talk.txt",
        2_394_385,
        5_021_410,
        131,
        1.96,
        3.89,
        true
    ),
    snap!(
        "web-BerkStan",
        "web-BerkStan.txt",
        685_230,
        7_600_595,
        201,
        11.11,
        19.41,
        true
    ),
    snap!(
        "soc-Pokec",
        "soc-pokec-relationships.txt",
        1_632_803,
        30_622_564,
        47,
        13.93,
        27.32,
        true
    ),
    snap!(
        "soc-LiveJournal",
        "soc-LiveJournal1.txt",
        4_847_571,
        68_993_773,
        372,
        9.38,
        17.68,
        true
    ),
];

/// Graphs small enough for routine runs.
pub const CI_SUBSET: &[&str] = &["web-NotreDame", "web-Stanford"];

/// Case-insensitive lookup by name.
pub fn find(name: &str) -> Option<&'static Dataset> {
    DATASETS.iter().find(|d| d.name.eq_ignore_ascii_case(name))
}

/// `$KCORE_DATA_DIR`, or `data` when unset.
pub fn data_dir() -> PathBuf {
    std::env::var_os("KCORE_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("data"))
}

impl Dataset {
    /// The decompressed file if present, else the gzip download.
    pub fn locate(&self, dir: &Path) -> Option<PathBuf> {
        let plain = dir.join(self.file_name);
        let gz = dir.join(format!("{}.gz", self.file_name));
        [plain, gz].into_iter().find(|p| p.is_file())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_lookup() {
        assert_eq!(find("roadnet-ca").unwrap().nodes, 1_965_206);
        assert_eq!(find("wiki-Talk").unwrap().k_max, 131);
        assert!(find("nope").is_none());
        assert!(CI_SUBSET.iter().all(|n| find(n).is_some()));
        assert!(DATASETS.iter().all(|d| d.url.ends_with(".gz")));
    }
}
