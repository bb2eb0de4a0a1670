#include "ecd/lab.hpp"

int main(int argc, char** argv) {
  return ecd::lab::run_main(argc, argv);
}
