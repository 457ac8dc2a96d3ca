fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let (code, paths) = dpc_cli::run(&argv);
    for p in paths {
        println!("{}", p.display());
    }
    std::process::exit(code);
}
