use clap::Parser;

use bestround::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli, &mut std::io::stderr()) {
        Ok(out) => print!("{out}"),
        Err(err) => {
            eprintln!("bestround: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
