//! Check the bundled collision-avoidance properties against `.nnet` models.
//!
//! cargo run --release --example acas -- DIR [PROPERTY...]
//!
//! DIR holds files such as `ACASXU_run2a_1_1_batch_2000.nnet`; every model
//! in it is checked against each property (default: phi1 to phi4). Without
//! DIR the example only parses and lists the properties.

use std::path::{Path, PathBuf};
use std::time::Duration;

use nnverify::{parse_property, verify, Config, Network, Property};

fn load(name: &str) -> nnverify::Result<Property> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/properties").join(format!("{name}.prop"));
    let text = std::fs::read_to_string(&path).map_err(|e| nnverify::Error::Io(format!("{}: {e}", path.display())))?;
    parse_property(&text)
}

fn main() -> nnverify::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = args.next().map(PathBuf::from);
    let mut names: Vec<String> = args.collect();
    if names.is_empty() {
        names = ["phi1", "phi2", "phi3", "phi4"].map(String::from).to_vec();
    }
    let props = names.iter().map(|n| load(n)).collect::<nnverify::Result<Vec<_>>>()?;

    let Some(dir) = dir else {
        for (n, p) in names.iter().zip(&props) {
            println!("{n}: {} region(s), {} inputs", p.input.regions.len(), p.input_dim());
        }
        println!("pass a directory of .nnet files to run them");
        return Ok(());
    };

    let mut models: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| nnverify::Error::Io(e.to_string()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "nnet"))
        .collect();
    models.sort();
    let cfg = Config {
        timeout: Duration::from_secs(60),
        ..Config::default()
    };
    for m in &models {
        let net = Network::load_path(m)?;
        for (n, p) in names.iter().zip(&props) {
            let v = verify(&net, p, &cfg)?;
            println!(
                "{:<40} {n:<6} {:<8} {:>8} nodes {:>7.2}s",
                m.file_name().unwrap_or_default().to_string_lossy(),
                v.status.to_string(),
                v.stats.nodes_explored,
                v.stats.wall_time
            );
        }
    }
    Ok(())
}
