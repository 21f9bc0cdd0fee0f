import threadpoolctl

# small matvecs everywhere; multi-threaded BLAS only adds sync overhead
threadpoolctl.threadpool_limits(1)
