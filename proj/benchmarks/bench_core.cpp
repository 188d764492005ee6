#include <benchmark/benchmark.h>
int main_placeholder() { return 0; }
BENCHMARK_MAIN();
