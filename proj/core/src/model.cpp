#include "payda/model.hpp"

namespace payda {

TransmitResult DrbQueue::transmit_from_head(Bits bits, Millis now) {
  assert(!packets_.empty());
  assert(bits > 0);

  TransmitResult result;
  Bits budget = bits;
  while (budget > 0 && !packets_.empty()) {
    Packet& head = packets_.front();
    const Bits take = std::min(budget, head.remaining_bits);
    head.remaining_bits -= take;
    budget -= take;
    result.consumed_bits += take;
    if (head.remaining_bits > 0) break;  // budget exhausted mid-packet
    head.delivered_time_ms = now;
    result.delivered.push_back(head);
    queued_size_bits_ -= head.size_bits;
    packets_.pop_front();
    if (expired_prefix_ > 0) --expired_prefix_;
  }
  queued_bits_ -= result.consumed_bits;
  return result;
}

}  // namespace payda
