fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GC_LOG", "warn")).init();
    std::process::exit(pgcompare::cli::main_with_args(std::env::args()));
}
