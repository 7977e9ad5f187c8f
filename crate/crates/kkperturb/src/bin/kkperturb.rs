fn main() {
    // The BLAS backend wants generous thread stacks for its factorization
    // kernels; run the CLI on a dedicated worker thread.
    let worker = std::thread::Builder::new()
        .name("kkperturb".into())
        .stack_size(64 * 1024 * 1024)
        .spawn(|| kkperturb::lab::cli::cli_main(std::env::args()))
        .expect("spawn worker thread");
    let code = worker.join().unwrap_or(1);
    std::process::exit(code);
}
