use std::fs::{self, File};
use std::io::{self, BufWriter};
use std::path::{Path, PathBuf};

use flate2::read::MultiGzDecoder;
use kcore::datasets::{self, Dataset};
use kcore::load_path;

use crate::args::FetchArgs;
use crate::error::CliError;

/// Size check of a downloaded graph against the manifest.
#[derive(Debug, PartialEq, Eq)]
pub struct Counts {
    pub nodes: usize,
    pub edges: usize,
}

pub fn fetch(args: &FetchArgs) -> Result<(), CliError> {
    let selected: Vec<&'static Dataset> = if args.all {
        datasets::DATASETS.iter().collect()
    } else {
        args.names
            .iter()
            .map(|n| {
                datasets::find(n).ok_or_else(|| CliError::Usage(format!("unknown dataset {n:?}")))
            })
            .collect::<Result<_, _>>()?
    };
    if selected.is_empty() {
        eprintln!("nothing to fetch");
        return Ok(());
    }
    let dir = args.dir.clone().unwrap_or_else(datasets::data_dir);
    fs::create_dir_all(&dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;

    let mut failed = 0;
    for d in &selected {
        let url = match &args.base_url {
            Some(base) => format!("{}/{}.gz", base.trim_end_matches('/'), d.file_name),
            None => d.url.to_string(),
        };
        match fetch_one(d, &url, &dir) {
            Ok((path, counts)) => {
                println!(
                    "{}: {} ({} nodes, {} edges)",
                    d.name,
                    path.display(),
                    counts.nodes,
                    counts.edges
                );
                for warning in size_warnings(d, &counts) {
                    eprintln!("warning: {}: {warning}", d.name);
                }
            }
            Err(e) => {
                eprintln!("error: {}: {e}", d.name);
                failed += 1;
            }
        }
    }
    if failed > 0 {
        return Err(CliError::Fetch {
            failed,
            total: selected.len(),
        });
    }
    Ok(())
}

fn fetch_one(d: &Dataset, url: &str, dir: &Path) -> Result<(PathBuf, Counts), CliError> {
    let target = dir.join(d.file_name);
    let partial = dir.join(format!("{}.part", d.file_name));
    let response = ureq::get(url).call().map_err(|e| {
        CliError::io(
            format!("downloading {url}"),
            io::Error::other(e.to_string()),
        )
    })?;
    let write = |partial: &Path| -> io::Result<()> {
        let mut out = BufWriter::new(File::create(partial)?);
        io::copy(&mut MultiGzDecoder::new(response.into_reader()), &mut out)?;
        out.into_inner().map_err(|e| e.into_error())?.sync_all()
    };
    write(&partial).map_err(|e| CliError::io(format!("saving {url}"), e))?;
    fs::rename(&partial, &target)
        .map_err(|e| CliError::io(format!("renaming {}", partial.display()), e))?;
    let g = load_path(&target).map_err(|source| CliError::Graph {
        context: format!("loading {}", target.display()),
        source,
    })?;
    Ok((
        target,
        Counts {
            nodes: g.node_count(),
            edges: g.edge_count(),
        },
    ))
}

/// Differences from the published sizes.
pub fn size_warnings(d: &Dataset, got: &Counts) -> Vec<String> {
    let mut out = Vec::new();
    if got.nodes != d.nodes {
        out.push(format!("{} nodes, manifest says {}", got.nodes, d.nodes));
    }
    if got.edges != d.edges {
        let note = if d.directed {
            " (directed source, counted after symmetrizing)"
        } else {
            ""
        };
        out.push(format!(
            "{} edges, manifest says {}{note}",
            got.edges, d.edges
        ));
    }
    out
}
