// JSON Lines trace files.
//
// Line 1 is a header {"seed":S,"rng":"<generator>","model_hash":"<hex>"}.
// Every following line is one step:
//   {"step":n,"applied":[{"rule":id,"subject":id,"host":id|null,"count":k}...],
//    "halted":bool,"state":{label:{symbol:count}}}
// "state" appears every `snapshot_every` steps (step % snapshot_every == 0)
// and on the final step.

#ifndef MOBMEM_TRACE_IO_HPP
#define MOBMEM_TRACE_IO_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "mobmem/engine.hpp"
#include "mobmem/model.hpp"

namespace mobmem {

/// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view bytes);

/// Digest of the canonical serialization.
std::string model_hash(const Model& model);

void write_trace_jsonl(std::ostream& out, const Trace& trace, const Model& model, std::size_t snapshot_every = 1);

}  // namespace mobmem

#endif  // MOBMEM_TRACE_IO_HPP
