use clap::Parser;
use smartlap::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let (mut out, mut log) = (std::io::stdout().lock(), std::io::stderr());
    if let Err(e) = run(cli, &mut out, &mut log) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
