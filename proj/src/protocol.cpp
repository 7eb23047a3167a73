#include "taxsim/protocol.hpp"

#include <algorithm>

namespace taxsim {

namespace {

template <class... Ts>
struct Overload : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overload(Ts...) -> Overload<Ts...>;

std::vector<uint8_t> frame(FrameType type, std::span<const uint8_t> payload) {
    if (payload.size() > 255) {
        throw std::length_error("payload exceeds one frame (255 bytes)");
    }
    std::vector<uint8_t> out;
    out.reserve(payload.size() + 4);
    out.push_back(kSof);
    out.push_back(static_cast<uint8_t>(type));
    out.push_back(static_cast<uint8_t>(payload.size()));
    out.insert(out.end(), payload.begin(), payload.end());
    out.push_back(checksum({out.data() + 1, out.size() - 1}));
    return out;
}

bool known_type(uint8_t t) {
    return (t >= 0x01 && t <= 0x04) || (t >= 0x81 && t <= 0x85);
}

// Expected payload length for fixed-size frame types; -1 when it depends
// on the configured dims (Show, StatusReply).
int fixed_payload_len(FrameType t) {
    switch (t) {
        case FrameType::Clear:
        case FrameType::Status:
        case FrameType::Ping:
        case FrameType::Ack:
        case FrameType::Busy:
        case FrameType::Pong: return 0;
        case FrameType::Nak: return 1;
        case FrameType::Show:
        case FrameType::StatusReply: return -1;
    }
    return -1;
}

struct ParseAttempt {
    enum class Kind { Incomplete, Message, Error } kind = Kind::Incomplete;
    std::optional<Message> msg;
    DecodeError err = DecodeError::BadSof;
    std::size_t sof = 0;       // offset of the start byte the attempt used
    bool sof_found = false;
    std::size_t consumed = 0;  // meaningful for Message / Error
};

// Parse one frame from the first start byte in `bytes`. On checksum
// failure only the false start byte is consumed so a real frame that the
// junk overlaps is still found; structurally complete frames that fail
// later checks are consumed whole.
ParseAttempt parse_one(std::span<const uint8_t> bytes, GridDims dims) {
    ParseAttempt r;
    const auto sof_it = std::find(bytes.begin(), bytes.end(), kSof);
    if (sof_it == bytes.end()) return r;  // Incomplete, no SOF
    r.sof = static_cast<std::size_t>(sof_it - bytes.begin());
    r.sof_found = true;

    const std::size_t avail = bytes.size() - r.sof;
    if (avail < 4) return r;  // Incomplete: need type, length, checksum
    const uint8_t type_byte = bytes[r.sof + 1];
    const std::size_t length = bytes[r.sof + 2];
    const std::size_t frame_len = 4 + length;
    if (avail < frame_len) return r;  // Incomplete

    const std::span<const uint8_t> covered = bytes.subspan(r.sof + 1, 2 + length);
    if (checksum(covered) != bytes[r.sof + 3 + length]) {
        r.kind = ParseAttempt::Kind::Error;
        r.err = DecodeError::BadChecksum;
        r.consumed = r.sof + 1;
        return r;
    }
    if (!known_type(type_byte)) {
        r.kind = ParseAttempt::Kind::Error;
        r.err = DecodeError::UnknownCommand;
        r.consumed = r.sof + frame_len;
        return r;
    }

    const auto type = static_cast<FrameType>(type_byte);
    const std::span<const uint8_t> payload = bytes.subspan(r.sof + 3, length);
    const int fixed = fixed_payload_len(type);
    if (fixed >= 0 && length != static_cast<std::size_t>(fixed)) {
        r.kind = ParseAttempt::Kind::Error;
        r.err = DecodeError::LengthMismatch;
        r.consumed = r.sof + frame_len;
        return r;
    }

    const std::size_t frame_bytes = Bitmap::byte_size(dims);
    auto fail_dims = [&] {
        r.kind = ParseAttempt::Kind::Error;
        r.err = DecodeError::BadDims;
        r.consumed = r.sof + frame_len;
        return r;
    };

    Message msg{ClearCmd{}};
    switch (type) {
        case FrameType::Show:
            if (length != frame_bytes) return fail_dims();
            msg = Command{ShowCmd{Bitmap::from_bytes(dims, payload)}};
            break;
        case FrameType::Clear: msg = Command{ClearCmd{}}; break;
        case FrameType::Status: msg = Command{StatusCmd{}}; break;
        case FrameType::Ping: msg = Command{PingCmd{}}; break;
        case FrameType::Ack: msg = Response{AckResp{}}; break;
        case FrameType::Busy: msg = Response{BusyResp{}}; break;
        case FrameType::StatusReply: {
            if (length != 5 + frame_bytes) return fail_dims();
            StatusResp s;
            s.state_code = payload[0];
            s.set_pulses = uint16_t((payload[1] << 8) | payload[2]);
            s.reset_pulses = uint16_t((payload[3] << 8) | payload[4]);
            s.shadow = Bitmap::from_bytes(dims, payload.subspan(5));
            msg = Response{std::move(s)};
            break;
        }
        case FrameType::Pong: msg = Response{PongResp{}}; break;
        case FrameType::Nak: msg = Response{NakResp{payload[0]}}; break;
    }

    r.kind = ParseAttempt::Kind::Message;
    r.msg = std::move(msg);
    r.consumed = r.sof + frame_len;
    return r;
}

}  // namespace

uint8_t checksum(std::span<const uint8_t> bytes) {
    uint8_t acc = 0;
    for (uint8_t b : bytes) acc ^= b;
    return acc;
}

std::vector<uint8_t> encode(const Command& cmd) {
    return std::visit(
        Overload{
            [](const ShowCmd& c) { return frame(FrameType::Show, c.frame.to_bytes()); },
            [](const ClearCmd&) { return frame(FrameType::Clear, {}); },
            [](const StatusCmd&) { return frame(FrameType::Status, {}); },
            [](const PingCmd&) { return frame(FrameType::Ping, {}); },
        },
        cmd);
}

std::vector<uint8_t> encode(const Response& resp) {
    return std::visit(
        Overload{
            [](const AckResp&) { return frame(FrameType::Ack, {}); },
            [](const BusyResp&) { return frame(FrameType::Busy, {}); },
            [](const StatusResp& s) {
                std::vector<uint8_t> payload;
                payload.push_back(s.state_code);
                payload.push_back(uint8_t(s.set_pulses >> 8));
                payload.push_back(uint8_t(s.set_pulses & 0xFF));
                payload.push_back(uint8_t(s.reset_pulses >> 8));
                payload.push_back(uint8_t(s.reset_pulses & 0xFF));
                const auto shadow = s.shadow.to_bytes();
                payload.insert(payload.end(), shadow.begin(), shadow.end());
                return frame(FrameType::StatusReply, payload);
            },
            [](const PongResp&) { return frame(FrameType::Pong, {}); },
            [](const NakResp& n) {
                const uint8_t payload[1] = {n.reason};
                return frame(FrameType::Nak, payload);
            },
        },
        resp);
}

std::vector<uint8_t> encode(const Message& msg) {
    return std::visit([](const auto& m) { return encode(m); }, msg);
}

const char* to_string(DecodeError err) {
    switch (err) {
        case DecodeError::BadSof: return "BadSof";
        case DecodeError::BadChecksum: return "BadChecksum";
        case DecodeError::UnknownCommand: return "UnknownCommand";
        case DecodeError::LengthMismatch: return "LengthMismatch";
        case DecodeError::BadDims: return "BadDims";
    }
    return "?";
}

DecodeOutcome decode(std::span<const uint8_t> bytes, GridDims dims) {
    dims.validate();
    ParseAttempt r = parse_one(bytes, dims);
    switch (r.kind) {
        case ParseAttempt::Kind::Incomplete:
            // A complete buffer that never completes a frame: either no
            // start byte at all, or the frame is cut short.
            if (!r.sof_found) return {DecodeError::BadSof, bytes.size()};
            return {DecodeError::LengthMismatch, r.sof};
        case ParseAttempt::Kind::Error: return {r.err, r.consumed};
        case ParseAttempt::Kind::Message: return {std::move(*r.msg), r.consumed};
    }
    return {DecodeError::BadSof, bytes.size()};
}

void FrameDecoder::feed(std::span<const uint8_t> bytes) {
    buf_.insert(buf_.end(), bytes.begin(), bytes.end());
}

std::optional<std::variant<Message, DecodeError>> FrameDecoder::poll() {
    ParseAttempt r = parse_one(buf_, dims_);
    switch (r.kind) {
        case ParseAttempt::Kind::Incomplete: {
            // Drop junk ahead of the start byte (or the whole buffer when
            // no start byte exists) and wait for more input.
            const std::size_t junk = r.sof_found ? r.sof : buf_.size();
            discarded_ += junk;
            buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(junk));
            return std::nullopt;
        }
        case ParseAttempt::Kind::Error: {
            discarded_ += r.sof;
            buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(r.consumed));
            return std::variant<Message, DecodeError>{r.err};
        }
        case ParseAttempt::Kind::Message: {
            discarded_ += r.sof;
            buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(r.consumed));
            return std::variant<Message, DecodeError>{std::move(*r.msg)};
        }
    }
    return std::nullopt;
}

}  // namespace taxsim
