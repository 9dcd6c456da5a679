#include "bdmec/ledger.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "bdmec/errors.hpp"

namespace bdmec {

const char* channel_name(Channel c) {
    return c == Channel::Delegator ? "delegator" : "worker";
}

namespace {

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8)
        out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_i64(std::vector<std::uint8_t>& out, std::int64_t v) {
    put_u64(out, static_cast<std::uint64_t>(v));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8)
        out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
    put_u64(out, std::bit_cast<std::uint64_t>(v));
}

void put_string(std::vector<std::uint8_t>& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.insert(out.end(), s.begin(), s.end());
}

struct Reader {
    const std::vector<std::uint8_t>& bytes;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > bytes.size()) throw Error("record bytes truncated");
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = (v << 8) | bytes[pos++];
        return v;
    }
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | bytes[pos++];
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string str() {
        const std::uint32_t n = u32();
        need(n);
        std::string s(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                      bytes.begin() + static_cast<std::ptrdiff_t>(pos + n));
        pos += n;
        return s;
    }
};

Hash256 zero_hash() { return Hash256{}; }

void check_record(const TransactionRecord& r) {
    if (r.lambda != 1 && r.lambda != -1)
        throw InvalidRecord("lambda must be +1 or -1");
    if (r.jobs_executed < 0) throw InvalidRecord("jobs_executed must be >= 0");
    if (!(r.speed_gain > 0.0)) throw InvalidRecord("speed_gain must be > 0");
    if (r.steal_chunk_size < 1) throw InvalidRecord("steal_chunk_size must be >= 1");
    if (!(r.task_complexity > 0.0)) throw InvalidRecord("task_complexity must be > 0");
    if (r.worker_id.empty()) throw InvalidRecord("worker_id must be non-empty");
}

}  // namespace

std::vector<std::uint8_t> serialize_records(const std::vector<TransactionRecord>& records) {
    std::vector<std::uint8_t> out;
    put_u32(out, static_cast<std::uint32_t>(records.size()));
    for (const auto& r : records) {
        put_i64(out, r.iteration_id);
        put_i64(out, r.task_id);
        put_string(out, r.worker_id);
        put_i64(out, r.jobs_executed);
        put_f64(out, r.speed_gain);
        put_i64(out, r.steal_chunk_size);
        put_string(out, r.location);
        put_u32(out, static_cast<std::uint32_t>(r.lambda));
        put_f64(out, r.task_complexity);
        put_i64(out, r.timestamp);
    }
    return out;
}

std::vector<TransactionRecord> deserialize_records(const std::vector<std::uint8_t>& bytes) {
    Reader in{bytes};
    const std::uint32_t count = in.u32();
    std::vector<TransactionRecord> records;
    records.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        TransactionRecord r;
        r.iteration_id = in.i64();
        r.task_id = in.i64();
        r.worker_id = in.str();
        r.jobs_executed = in.i64();
        r.speed_gain = in.f64();
        r.steal_chunk_size = in.i64();
        r.location = in.str();
        r.lambda = static_cast<std::int32_t>(in.u32());
        r.task_complexity = in.f64();
        r.timestamp = in.i64();
        records.push_back(std::move(r));
    }
    if (in.pos != bytes.size()) throw Error("trailing bytes after records");
    return records;
}

namespace {

std::vector<std::uint8_t> block_bytes(const Block& b) {
    std::vector<std::uint8_t> out;
    out.reserve(LedgerStore::block_byte_size(b));
    put_u64(out, b.height);
    out.push_back(b.channel_tag);
    out.insert(out.end(), b.prev_hash.begin(), b.prev_hash.end());
    out.insert(out.end(), b.payload_hash.begin(), b.payload_hash.end());
    out.insert(out.end(), b.payload_bytes.begin(), b.payload_bytes.end());
    return out;
}

}  // namespace

std::size_t LedgerStore::block_byte_size(const Block& b) {
    return 8 + 1 + 32 + 32 + b.payload_bytes.size();
}

Hash256 Block::block_hash() const { return sha256(block_bytes(*this)); }

LedgerStore::LedgerStore() {
    for (Channel ch : {Channel::Delegator, Channel::Worker}) {
        Block genesis;
        genesis.height = 0;
        genesis.channel_tag = static_cast<std::uint8_t>(ch);
        genesis.prev_hash = zero_hash();
        genesis.payload_bytes = serialize_records({});
        genesis.payload_hash = sha256(genesis.payload_bytes);
        chain_mut(ch).push_back(std::move(genesis));
    }
}

std::vector<Block>& LedgerStore::chain_mut(Channel channel) {
    return channel == Channel::Delegator ? delegator_chain_ : worker_chain_;
}

const std::vector<Block>& LedgerStore::chain(Channel channel) const {
    return channel == Channel::Delegator ? delegator_chain_ : worker_chain_;
}

void LedgerStore::commit(Channel channel, const TransactionRecord& record,
                         std::uint64_t* height_out) {
    auto& chain = chain_mut(channel);
    Block block;
    block.height = chain.size();
    block.channel_tag = static_cast<std::uint8_t>(channel);
    block.prev_hash = chain.back().block_hash();
    block.payload_bytes = serialize_records({record});
    block.payload_hash = sha256(block.payload_bytes);
    block.records = {record};
    if (height_out) *height_out = block.height;
    chain.push_back(std::move(block));
}

AppendReceipt LedgerStore::append_transaction(Channel channel, const TransactionRecord& record) {
    check_record(record);
    if (!connected_) {
        buffer_.emplace_back(channel, record);
        return {false, 0};
    }
    flush_offline_buffer();
    AppendReceipt receipt;
    receipt.committed = true;
    commit(channel, record, &receipt.height);
    return receipt;
}

std::size_t LedgerStore::flush_offline_buffer() {
    if (!connected_) throw NotConnected("flush requires a connected store");
    const std::size_t n = buffer_.size();
    for (const auto& [channel, record] : buffer_) commit(channel, record, nullptr);
    buffer_.clear();
    return n;
}

std::vector<ChainViolation> LedgerStore::verify_chain(Channel channel) const {
    std::vector<ChainViolation> violations;
    const auto& blocks = chain(channel);
    for (std::size_t h = 0; h < blocks.size(); ++h) {
        const Block& b = blocks[h];
        if (b.height != h)
            violations.push_back({static_cast<std::uint64_t>(h), "height mismatch"});
        if (b.channel_tag != static_cast<std::uint8_t>(channel))
            violations.push_back({static_cast<std::uint64_t>(h), "channel mismatch"});
        if (sha256(b.payload_bytes) != b.payload_hash)
            violations.push_back({static_cast<std::uint64_t>(h), "payload hash mismatch"});
        if (h == 0) {
            if (b.prev_hash != zero_hash())
                violations.push_back({0, "genesis prev hash not zero"});
        } else if (b.prev_hash != blocks[h - 1].block_hash()) {
            violations.push_back({static_cast<std::uint64_t>(h), "link hash mismatch"});
        }
    }
    return violations;
}

std::vector<TransactionRecord> LedgerStore::query_worker_history(
    Channel channel, const std::string& worker_id) const {
    std::vector<TransactionRecord> result;
    for (const auto& block : chain(channel))
        for (const auto& record : block.records)
            if (record.worker_id == worker_id) result.push_back(record);
    return result;
}

void LedgerStore::export_stream(std::ostream& out) const {
    for (Channel ch : {Channel::Delegator, Channel::Worker}) {
        for (const auto& b : chain(ch)) {
            out << channel_name(ch) << ',' << b.height << ','
                << hex_encode(b.prev_hash) << ',' << hex_encode(b.payload_hash) << ','
                << hex_encode(b.payload_bytes) << ',' << hex_encode(b.block_hash()) << '\n';
        }
    }
}

void LedgerStore::export_file(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    export_stream(out);
    if (!out.flush()) throw IoFailure("write failed: " + path.string());
}

LedgerStore LedgerStore::import_stream(std::istream& in) {
    LedgerStore store;
    store.delegator_chain_.clear();
    store.worker_chain_.clear();

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream fields(line);
        std::string channel_field, height_field, prev_field, payload_hash_field, payload_field,
            digest_field;
        if (!std::getline(fields, channel_field, ',') ||
            !std::getline(fields, height_field, ',') ||
            !std::getline(fields, prev_field, ',') ||
            !std::getline(fields, payload_hash_field, ',') ||
            !std::getline(fields, payload_field, ',') ||
            !std::getline(fields, digest_field))
            throw IoFailure("ledger line " + std::to_string(line_no) + ": bad field count");

        Channel ch;
        if (channel_field == channel_name(Channel::Delegator)) {
            ch = Channel::Delegator;
        } else if (channel_field == channel_name(Channel::Worker)) {
            ch = Channel::Worker;
        } else {
            throw IoFailure("ledger line " + std::to_string(line_no) + ": unknown channel");
        }

        Block b;
        b.channel_tag = static_cast<std::uint8_t>(ch);
        try {
            b.height = std::stoull(height_field);
        } catch (const std::exception&) {
            throw IoFailure("ledger line " + std::to_string(line_no) + ": bad height");
        }
        std::vector<std::uint8_t> buf;
        if (!hex_decode(prev_field, buf) || buf.size() != 32)
            throw IoFailure("ledger line " + std::to_string(line_no) + ": bad prev hash");
        std::copy(buf.begin(), buf.end(), b.prev_hash.begin());
        if (!hex_decode(payload_hash_field, buf) || buf.size() != 32)
            throw IoFailure("ledger line " + std::to_string(line_no) + ": bad payload hash");
        std::copy(buf.begin(), buf.end(), b.payload_hash.begin());
        if (!hex_decode(payload_field, b.payload_bytes))
            throw IoFailure("ledger line " + std::to_string(line_no) + ": bad payload hex");
        if (!hex_decode(digest_field, buf) || buf.size() != 32)
            throw IoFailure("ledger line " + std::to_string(line_no) + ": bad line digest");
        Hash256 stated;
        std::copy(buf.begin(), buf.end(), stated.begin());
        if (stated != b.block_hash())
            throw IoFailure("ledger line " + std::to_string(line_no) + ": line digest mismatch");
        try {
            b.records = deserialize_records(b.payload_bytes);
        } catch (const Error&) {
            b.records.clear();  // verify_chain reports the payload corruption
        }
        store.chain_mut(ch).push_back(std::move(b));
    }
    return store;
}

LedgerStore LedgerStore::import_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path.string());
    return import_stream(in);
}

void LedgerStore::tamper_bit_for_test(Channel channel, std::uint64_t height,
                                      std::size_t bit_index) {
    auto& blocks = chain_mut(channel);
    if (height >= blocks.size()) throw Error("tamper height out of range");
    Block& b = blocks[static_cast<std::size_t>(height)];
    auto bytes = block_bytes(b);
    if (bit_index >= bytes.size() * 8) throw Error("tamper bit out of range");
    bytes[bit_index / 8] ^= static_cast<std::uint8_t>(1u << (bit_index % 8));

    Reader in{bytes};
    b.height = in.u64();
    in.need(1);
    b.channel_tag = bytes[in.pos++];
    std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(in.pos), 32, b.prev_hash.begin());
    in.pos += 32;
    std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(in.pos), 32, b.payload_hash.begin());
    in.pos += 32;
    b.payload_bytes.assign(bytes.begin() + static_cast<std::ptrdiff_t>(in.pos), bytes.end());
    // The parsed record view is stale after tampering; integrity checks work
    // on the raw bytes only.
}

}  // namespace bdmec
