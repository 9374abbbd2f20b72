use clap::Parser;
use ricci_mesh_cli::{execute, Cli, EXIT_USAGE};

fn main() {
    if let Ok(v) = std::env::var("RICCI_MESH_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("thread pool starts once");
            }
            _ => {
                eprintln!("error: RICCI_MESH_THREADS must be a positive integer, got `{v}`");
                std::process::exit(EXIT_USAGE);
            }
        }
    }
    std::process::exit(execute(Cli::parse()));
}
