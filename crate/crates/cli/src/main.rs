use clap::Parser;

fn main() {
    let cli = pdsat_cli::Cli::parse();
    std::process::exit(pdsat_cli::run(&cli));
}
