#include "pqv2x/message.hpp"

namespace pqv2x {

namespace {

class ByteWriter {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16be(std::uint16_t v) {
        out_.push_back(static_cast<std::uint8_t>(v >> 8));
        out_.push_back(static_cast<std::uint8_t>(v));
    }
    void u32be(std::uint32_t v) {
        for (int shift = 24; shift >= 0; shift -= 8) {
            out_.push_back(static_cast<std::uint8_t>(v >> shift));
        }
    }
    void u64be(std::uint64_t v) {
        for (int shift = 56; shift >= 0; shift -= 8) {
            out_.push_back(static_cast<std::uint8_t>(v >> shift));
        }
    }
    void raw(const Bytes& b) { out_.insert(out_.end(), b.begin(), b.end()); }
    void raw(const std::uint8_t* p, std::size_t n) { out_.insert(out_.end(), p, p + n); }

    Bytes take() { return std::move(out_); }

private:
    Bytes out_;
};

class ByteReader {
public:
    explicit ByteReader(const Bytes& b) : data_(b) {}

    bool u8(std::uint8_t& v) {
        if (pos_ + 1 > data_.size()) return false;
        v = data_[pos_++];
        return true;
    }
    bool u16be(std::uint16_t& v) {
        if (pos_ + 2 > data_.size()) return false;
        v = static_cast<std::uint16_t>((data_[pos_] << 8) | data_[pos_ + 1]);
        pos_ += 2;
        return true;
    }
    bool u32be(std::uint32_t& v) {
        if (pos_ + 4 > data_.size()) return false;
        v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_ + i];
        pos_ += 4;
        return true;
    }
    bool u64be(std::uint64_t& v) {
        if (pos_ + 8 > data_.size()) return false;
        v = 0;
        for (int i = 0; i < 8; ++i) v = (v << 8) | data_[pos_ + i];
        pos_ += 8;
        return true;
    }
    bool raw(Bytes& out, std::size_t n) {
        if (pos_ + n > data_.size()) return false;
        out.assign(data_.begin() + static_cast<std::ptrdiff_t>(pos_),
                   data_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
        pos_ += n;
        return true;
    }
    bool exhausted() const { return pos_ == data_.size(); }

private:
    const Bytes& data_;
    std::size_t pos_ = 0;
};

template <typename T>
Decoded<T> fail(DecodeError e) {
    Decoded<T> d;
    d.error = e;
    return d;
}

} // namespace

std::string to_string(DecodeError e) {
    switch (e) {
    case DecodeError::truncated: return "truncated";
    case DecodeError::length_overrun: return "length_overrun";
    case DecodeError::unknown_version: return "unknown_version";
    case DecodeError::bad_field: return "bad_field";
    }
    return "unknown";
}

Bytes encode_payload(const IcaMessage& msg) {
    ByteWriter w;
    w.u8(msg.msg_count);
    w.u32be(msg.sender_id);
    w.u64be(msg.timestamp_ms);
    w.u32be(msg.intersection_id);
    w.u8(msg.event_flag);
    w.u8(static_cast<std::uint8_t>(msg.conflicting_vehicles.size()));
    for (VehicleId id : msg.conflicting_vehicles) {
        w.u32be(id);
    }
    return w.take();
}

Decoded<IcaMessage> decode_payload(const Bytes& bytes) {
    ByteReader r(bytes);
    IcaMessage msg;
    std::uint8_t count = 0;
    if (!r.u8(msg.msg_count) || !r.u32be(msg.sender_id) || !r.u64be(msg.timestamp_ms) ||
        !r.u32be(msg.intersection_id) || !r.u8(msg.event_flag) || !r.u8(count)) {
        return fail<IcaMessage>(DecodeError::truncated);
    }
    if (msg.msg_count > 127) {
        return fail<IcaMessage>(DecodeError::bad_field);
    }
    msg.conflicting_vehicles.resize(count);
    for (std::uint8_t i = 0; i < count; ++i) {
        if (!r.u32be(msg.conflicting_vehicles[i])) {
            return fail<IcaMessage>(DecodeError::truncated);
        }
    }
    if (!r.exhausted()) {
        return fail<IcaMessage>(DecodeError::length_overrun);
    }
    return {msg, DecodeError::truncated};
}

Bytes encode_certificate(const Certificate& cert) {
    ByteWriter w;
    w.u32be(cert.subject_id);
    w.u64be(cert.not_before_ms);
    w.u64be(cert.not_after_ms);
    w.u8(cert.scheme_id);
    w.u16be(static_cast<std::uint16_t>(cert.verification_key.size()));
    w.raw(cert.verification_key);
    w.raw(cert.issuer_fingerprint.data(), cert.issuer_fingerprint.size());
    return w.take();
}

Decoded<Certificate> decode_certificate(const Bytes& bytes) {
    ByteReader r(bytes);
    Certificate cert;
    std::uint16_t key_len = 0;
    if (!r.u32be(cert.subject_id) || !r.u64be(cert.not_before_ms) ||
        !r.u64be(cert.not_after_ms) || !r.u8(cert.scheme_id) || !r.u16be(key_len)) {
        return fail<Certificate>(DecodeError::truncated);
    }
    if (!r.raw(cert.verification_key, key_len)) {
        return fail<Certificate>(DecodeError::truncated);
    }
    Bytes fp;
    if (!r.raw(fp, cert.issuer_fingerprint.size())) {
        return fail<Certificate>(DecodeError::truncated);
    }
    std::copy(fp.begin(), fp.end(), cert.issuer_fingerprint.begin());
    if (!r.exhausted()) {
        return fail<Certificate>(DecodeError::length_overrun);
    }
    if (cert.not_before_ms > cert.not_after_ms) {
        return fail<Certificate>(DecodeError::bad_field);
    }
    return {cert, DecodeError::truncated};
}

Bytes encode_envelope(const SignedEnvelope& env) {
    ByteWriter w;
    w.u8(env.version);
    w.u8(env.msg_type);
    w.u16be(static_cast<std::uint16_t>(env.payload.size()));
    w.raw(env.payload);
    w.u16be(static_cast<std::uint16_t>(env.certificate.size()));
    w.raw(env.certificate);
    w.u16be(static_cast<std::uint16_t>(env.signature.size()));
    w.raw(env.signature);
    return w.take();
}

Decoded<SignedEnvelope> decode_envelope(const Bytes& bytes) {
    ByteReader r(bytes);
    SignedEnvelope env;
    if (!r.u8(env.version)) {
        return fail<SignedEnvelope>(DecodeError::truncated);
    }
    if (env.version != kEnvelopeVersion) {
        return fail<SignedEnvelope>(DecodeError::unknown_version);
    }
    std::uint16_t len = 0;
    if (!r.u8(env.msg_type) || !r.u16be(len) || !r.raw(env.payload, len)) {
        return fail<SignedEnvelope>(DecodeError::truncated);
    }
    if (!r.u16be(len) || !r.raw(env.certificate, len)) {
        return fail<SignedEnvelope>(DecodeError::truncated);
    }
    if (!r.u16be(len) || !r.raw(env.signature, len)) {
        return fail<SignedEnvelope>(DecodeError::truncated);
    }
    if (!r.exhausted()) {
        return fail<SignedEnvelope>(DecodeError::length_overrun);
    }
    return {env, DecodeError::truncated};
}

Bytes signing_prefix(const SignedEnvelope& env) {
    Bytes prefix;
    prefix.reserve(2 + env.payload.size());
    prefix.push_back(env.version);
    prefix.push_back(env.msg_type);
    prefix.insert(prefix.end(), env.payload.begin(), env.payload.end());
    return prefix;
}

} // namespace pqv2x
