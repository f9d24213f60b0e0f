// Reference external agent: replies to every frame with its observation
// byte.  Exits when stdin closes.

#include <cstdio>

int main() {
  unsigned char frame[2];
  while (std::fread(frame, 1, 2, stdin) == 2) {
    std::fputc(frame[0], stdout);
    std::fflush(stdout);
  }
  return 0;
}
