// Ordered registers of tagged photons. A tag names the owning party and the
// copy of the distributed system it came from (A1 B1 C1 A2 B2 C2 ...).
// Measurements remove the photon and shrink every basis label consistently.

#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace ghzpurify {

struct PhotonTag {
    char party = 'A';
    uint8_t copy = 1;

    PhotonTag() = default;
    PhotonTag(char p, uint8_t c) : party(p), copy(c) {}

    std::string str() const { return std::string(1, party) + std::to_string(copy); }

    friend bool operator==(const PhotonTag& x, const PhotonTag& y) {
        return x.party == y.party && x.copy == y.copy;
    }
    friend bool operator<(const PhotonTag& x, const PhotonTag& y) {
        return x.party != y.party ? x.party < y.party : x.copy < y.copy;
    }
};

class PhotonRegister {
public:
    PhotonRegister() = default;
    explicit PhotonRegister(std::vector<PhotonTag> photons) : photons_(std::move(photons)) {
        for (size_t i = 0; i < photons_.size(); ++i)
            for (size_t j = i + 1; j < photons_.size(); ++j)
                if (photons_[i] == photons_[j])
                    throw std::invalid_argument("duplicate photon tag " + photons_[i].str());
    }

    static PhotonRegister party_run(uint8_t n, uint8_t copy, char first_party = 'A') {
        std::vector<PhotonTag> tags;
        tags.reserve(n);
        for (uint8_t i = 0; i < n; ++i) tags.emplace_back(static_cast<char>(first_party + i), copy);
        return PhotonRegister(std::move(tags));
    }

    size_t size() const { return photons_.size(); }
    const std::vector<PhotonTag>& photons() const { return photons_; }
    const PhotonTag& at(size_t i) const { return photons_.at(i); }

    bool contains(const PhotonTag& t) const {
        return std::find(photons_.begin(), photons_.end(), t) != photons_.end();
    }

    size_t index_of(const PhotonTag& t) const {
        auto it = std::find(photons_.begin(), photons_.end(), t);
        if (it == photons_.end()) throw std::invalid_argument("unknown photon tag " + t.str());
        return static_cast<size_t>(it - photons_.begin());
    }

    PhotonRegister without(size_t i) const {
        auto tags = photons_;
        tags.erase(tags.begin() + static_cast<long>(i));
        PhotonRegister r;
        r.photons_ = std::move(tags);
        return r;
    }

    static PhotonRegister concatenated(const PhotonRegister& x, const PhotonRegister& y) {
        auto tags = x.photons_;
        tags.insert(tags.end(), y.photons_.begin(), y.photons_.end());
        return PhotonRegister(std::move(tags));
    }

    std::string str() const {
        std::string s;
        for (const auto& t : photons_) s += t.str();
        return s;
    }

    friend bool operator==(const PhotonRegister& x, const PhotonRegister& y) {
        return x.photons_ == y.photons_;
    }

private:
    std::vector<PhotonTag> photons_;
};

} // namespace ghzpurify
