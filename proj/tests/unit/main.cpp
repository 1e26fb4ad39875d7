#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "sptvqe/gate_matrix.hpp"

int main(int argc, char** argv) {
  sptvqe::set_gate_validation(true);
  doctest::Context context;
  context.applyCommandLine(argc, argv);
  return context.run();
}
