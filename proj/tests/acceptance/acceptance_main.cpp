// Acceptance suite: one pass/fail line per criterion. Placeholder; filled in
// alongside the full pipeline.
#include <cstdio>

int main() {
  std::printf("acceptance suite not yet implemented\n");
  return 1;
}
