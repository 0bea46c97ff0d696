#pragma once

// Binary container for a trained reduced model.
//
// Layout (all integers little-endian):
//   magic   "FROM1\0"                        6 bytes
//   version u32 (currently 1)
//   payload:
//     u64 json_len, json_len bytes of compact JSON (the RomMeta fields)
//     V      : u64 rows, u64 cols, rows*cols f64 column-major
//     A_hat_t: same encoding, one per operator term (count from meta)
//     M_hat  : same encoding
//     g_hat_t: u64 len, len f64, one per load term
//   crc     u32, CRC-32 of the payload bytes
//
// Serialization is deterministic (sorted JSON keys, shortest round-trip
// number formatting), so write -> read -> write reproduces identical bytes.

#include <string>

#include "fracrom/rom.hpp"

namespace fracrom {

std::string rom_to_bytes(const RomArtifact& rom);
RomArtifact rom_from_bytes(const std::string& bytes);

void save_rom(const std::string& path, const RomArtifact& rom);
RomArtifact load_rom(const std::string& path);

// Small file helpers shared with the CLI layer (throw IoError on failure).
void write_file(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);

}  // namespace fracrom
