#include "costlab/omega.hpp"

namespace costlab {

// Sixty-four programs of a prefix-free code with their halting stages. The
// code has total weight 255/256 and "1" halts first, so the stream opens with
// an increment of 1/2. Halting times are spread so that the remaining mass
// after stage n exceeds 2^-(n+1) for every n <= 50 at horizon 2000.
const std::vector<ToyProgram>& toy_machine_table() {
  static const std::vector<ToyProgram> table = {
    {"1", 1},
    {"001000", 4},
    {"001001", 8},
    {"0101001", 14},
    {"0011100", 20},
    {"0101111", 29},
    {"0011111", 38},
    {"0111101", 49},
    {"0110001", 61},
    {"0001010", 74},
    {"0001111", 88},
    {"0000010", 103},
    {"0111110", 119},
    {"0000011", 136},
    {"000110", 153},
    {"00010011", 172},
    {"00010010", 192},
    {"010010", 213},
    {"0111111", 234},
    {"0000111", 256},
    {"00101110", 279},
    {"00000000", 303},
    {"0100000", 328},
    {"00111011", 354},
    {"0101101", 380},
    {"0100010", 407},
    {"010011", 435},
    {"00111010", 464},
    {"010101", 493},
    {"011011", 523},
    {"0101100", 554},
    {"0101000", 586},
    {"0100001", 618},
    {"0001011", 651},
    {"0111000", 685},
    {"0111001", 719},
    {"0111100", 754},
    {"0110101", 790},
    {"001101", 827},
    {"011101", 864},
    {"00001001", 902},
    {"01011101", 941},
    {"000010000", 980},
    {"0011110", 1020},
    {"011001", 1060},
    {"011000011", 1101},
    {"0110100", 1143},
    {"00110010", 1186},
    {"011000010", 1229},
    {"00000011", 1273},
    {"01100000", 1317},
    {"001010", 1362},
    {"0001110", 1408},
    {"0000101", 1454},
    {"0000110", 1501},
    {"0011000", 1548},
    {"0001000", 1596},
    {"00110011", 1645},
    {"0010110", 1694},
    {"00000010", 1744},
    {"01011100", 1795},
    {"0100011", 1846},
    {"000010001", 1897},
    {"00101111", 1950},
  };
  return table;
}

}  // namespace costlab
