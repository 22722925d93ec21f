use clap::Parser;
use storyline_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("storyline: {e}");
        std::process::exit(e.exit_code());
    }
}
