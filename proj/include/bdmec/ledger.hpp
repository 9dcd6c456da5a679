#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "bdmec/digest.hpp"

namespace bdmec {

// Two ledgers per the privacy model: the delegator's channel carries true
// job counts and is read by selection; the worker channel is public and
// carries Laplace-noised counts.
enum class Channel : std::uint8_t { Delegator = 0, Worker = 1 };

const char* channel_name(Channel c);

struct TransactionRecord {
    std::int64_t iteration_id = 0;
    std::int64_t task_id = 0;
    std::string worker_id;
    std::int64_t jobs_executed = 0;  // true count or noised count by channel
    double speed_gain = 1.0;         // iteration S
    std::int64_t steal_chunk_size = 1;
    std::string location;
    int lambda = 1;  // +1 or -1
    double task_complexity = 1.0;
    std::int64_t timestamp = 0;  // logical clock
};

// Canonical serialization: fixed field order, integers big-endian
// fixed-width, reals as raw IEEE-754 bit patterns, strings length-prefixed.
// Hashing and the export file format both build on these bytes.
std::vector<std::uint8_t> serialize_records(const std::vector<TransactionRecord>& records);
std::vector<TransactionRecord> deserialize_records(const std::vector<std::uint8_t>& bytes);

struct Block {
    std::uint64_t height = 0;
    std::uint8_t channel_tag = 0;  // raw so a tampered value stays representable
    Hash256 prev_hash{};
    Hash256 payload_hash{};
    std::vector<std::uint8_t> payload_bytes;
    std::vector<TransactionRecord> records;  // parsed view of payload_bytes

    // Digest over height | channel | prev_hash | payload_hash | payload,
    // which is exactly the on-disk line, so any stored bit participates.
    Hash256 block_hash() const;
};

struct AppendReceipt {
    bool committed = false;     // false means buffered while offline
    std::uint64_t height = 0;   // valid when committed
};

struct ChainViolation {
    std::uint64_t height = 0;
    std::string reason;
};

class LedgerStore {
public:
    LedgerStore();  // genesis block on both channels, connected

    bool connected() const { return connected_; }
    void set_connected(bool connected) { connected_ = connected; }

    // Seals one block per record when connected (flushing anything buffered
    // first, so commit order is arrival order); buffers otherwise.
    AppendReceipt append_transaction(Channel channel, const TransactionRecord& record);

    // Commits buffered records in FIFO order. Throws NotConnected offline.
    std::size_t flush_offline_buffer();

    std::size_t offline_buffer_size() const { return buffer_.size(); }

    // Recomputes every hash; empty result means the chain is intact.
    std::vector<ChainViolation> verify_chain(Channel channel) const;

    // All records for worker_id on the channel, in commit order.
    std::vector<TransactionRecord> query_worker_history(Channel channel,
                                                        const std::string& worker_id) const;

    const std::vector<Block>& chain(Channel channel) const;

    void export_file(const std::filesystem::path& path) const;
    void export_stream(std::ostream& out) const;
    static LedgerStore import_file(const std::filesystem::path& path);
    static LedgerStore import_stream(std::istream& in);

    // Test-only backdoor: flips one bit of the block's canonical byte string
    // (header fields or payload) in place. Committed blocks are otherwise
    // immutable.
    void tamper_bit_for_test(Channel channel, std::uint64_t height, std::size_t bit_index);

    // Canonical byte length of a block, defining the tamper surface.
    static std::size_t block_byte_size(const Block& b);

private:
    std::vector<Block>& chain_mut(Channel channel);
    void commit(Channel channel, const TransactionRecord& record, std::uint64_t* height_out);

    std::vector<Block> delegator_chain_;
    std::vector<Block> worker_chain_;
    std::vector<std::pair<Channel, TransactionRecord>> buffer_;
    bool connected_ = true;
};

}  // namespace bdmec
