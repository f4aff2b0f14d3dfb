//! The command-line front end driven in-process, writing its reports to a
//! temporary directory.
//!
//!     cargo run --example cli

pub fn main() {
    let out = std::env::temp_dir().join(format!("yoccoz-example-{}", std::process::id()));
    let dir = out.to_str().unwrap();
    let spec = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/synthetic.json");
    let runs: [&[&str]; 3] = [
        &["rays", "--c-im", "1", "--limb", "1/3"],
        &["tableau", "--c-im", "1", "--limb", "1/3", "--depth", "4", "--width", "12"],
        &["nest", "--mode", "synthetic", "--spec", spec, "--batches", "4", "--seed", "1"],
    ];
    for args in runs {
        let mut argv = vec!["yoccoz"];
        argv.extend_from_slice(args);
        argv.extend(["--out", dir]);
        println!("yoccoz {} -> exit {}", args.join(" "), yoccoz::cli::run(argv));
    }
    let mut files: Vec<String> = std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    files.sort();
    println!("wrote {}", files.join(", "));
    let divergence = std::fs::read_to_string(out.join("divergence.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&divergence).unwrap();
    println!("running total {} against bound {}", v["running_total"]["exact"], v["bound"]["exact"]);
    std::fs::remove_dir_all(&out).ok();
}
