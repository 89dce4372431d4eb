fn main() {
    // Dense kernels (eig/svd/solve/det) go through LAPACK; link the system
    // reference implementation. BLAS is pulled in for LAPACK's own needs.
    println!("cargo:rustc-link-lib=dylib=lapack");
    println!("cargo:rustc-link-lib=dylib=blas");
}
