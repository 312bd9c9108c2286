use clap::Parser;

use qgraph_cli::args::Cli;

fn main() {
    let cli = Cli::parse();
    if let Err(e) = qgraph_cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
