use clap::Parser;

fn main() {
    let cli = listdec::cli::Cli::parse();
    std::process::exit(listdec::cli::run(cli));
}
