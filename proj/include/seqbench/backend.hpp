#pragma once

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <deque>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "seqbench/disk_model.hpp"
#include "seqbench/filegen.hpp"
#include "seqbench/topology.hpp"
#include "seqbench/units.hpp"

namespace seqbench {

class WriteSafetyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TargetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Looks up the topology for a preset name, preferring <name>.topo under the
// directory named by SEQBENCH_PRESET_DIR over the built-in definitions.
inline Topology resolve_topology(const std::string& name) {
    if (const char* dir = std::getenv("SEQBENCH_PRESET_DIR")) {
        const std::string path = std::string(dir) + "/" + name + ".topo";
        std::ifstream in(path, std::ios::binary);
        if (in) {
            std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
            return Topology::parse(text);
        }
    }
    return preset(name);
}

// One benchmark target, named by a locator string:
//   file:<path>   a regular file (bare paths are taken as file paths too)
//   sim:<preset>/<disk-id>   one disk of a modeled machine
struct Target {
    enum class Kind { file, sim };
    Kind kind = Kind::file;
    std::string locator;
    std::string path;         // file targets
    std::string preset_name;  // sim targets (canonical)
    std::string disk_id;
    std::uint64_t size_bytes = 0;
    std::uint64_t granule = 4096;  // offsets and lengths must be multiples of this
};

inline Target open_target(const std::string& locator, Mode mode, bool allow_write = false) {
    Target t;
    t.locator = locator;
    if (locator.rfind("sim:", 0) == 0) {
        const std::string rest = locator.substr(4);
        const auto slash = rest.find('/');
        if (slash == std::string::npos || slash == 0 || slash + 1 == rest.size())
            throw TargetError("sim locator must look like sim:<preset>/<disk-id>: " + locator);
        t.kind = Target::Kind::sim;
        t.preset_name = rest.substr(0, slash);
        try {
            t.preset_name = canonical_preset_name(t.preset_name);
        } catch (const UnknownPresetError&) {
            // not a built-in alias; resolve_topology may still find it on disk
        }
        t.disk_id = rest.substr(slash + 1);
        Topology topo = resolve_topology(t.preset_name);
        const int idx = topo.find(t.disk_id);
        if (idx < 0 || topo.node(idx).kind != NodeKind::disk)
            throw TargetError("preset " + t.preset_name + " has no disk named " + t.disk_id);
        t.size_bytes = topo.disk_model(idx).size_bytes;
        t.granule = 512;
        return t;
    }
    t.kind = Target::Kind::file;
    t.path = locator.rfind("file:", 0) == 0 ? locator.substr(5) : locator;
    if (t.path.empty()) throw TargetError("empty file path in locator: " + locator);
    if (mode == Mode::write) {
        if (t.path.rfind("/dev/", 0) == 0)
            throw WriteSafetyError("refusing to write to a device node: " + t.path);
        if (!allow_write && !looks_generated(t.path))
            throw WriteSafetyError(t.path +
                                   " does not look like a generated benchmark file; "
                                   "pass the write-consent flag or regenerate it");
    }
    struct stat st {};
    if (::stat(t.path.c_str(), &st) != 0)
        throw TargetError("cannot stat " + t.path + ": " + std::strerror(errno));
    if (!S_ISREG(st.st_mode)) throw TargetError(t.path + " is not a regular file");
    t.size_bytes = static_cast<std::uint64_t>(st.st_size);
    t.granule = 4096;
    return t;
}

struct IoRequest {
    std::uint64_t offset = 0;
    std::uint64_t bytes = 0;
};

struct IoCompletion {
    std::uint64_t offset = 0;
    std::uint64_t bytes = 0;
    bool ok = true;
    std::string error;
};

// Overlapped request interface shared by the real and mock transports. The
// engine fills the queue to its depth and collects one completion at a
// time; now_s() is the transport's own clock so mock runs stay virtual.
class AsyncDevice {
public:
    virtual ~AsyncDevice() = default;
    virtual void submit(const IoRequest& req) = 0;
    virtual IoCompletion wait_one() = 0;
    virtual double now_s() = 0;
};

// Real files: a small thread pool doing positional reads and writes.
// Unbuffered mode asks for O_DIRECT and quietly falls back to the page
// cache on filesystems that refuse it (tmpfs does).
class FileDevice : public AsyncDevice {
public:
    FileDevice(const std::string& path, Mode mode, Buffering buffering, int n_workers,
               std::uint64_t max_request)
        : mode_(mode) {
        int flags = mode == Mode::read ? O_RDONLY : O_WRONLY;
        if (buffering == Buffering::unbuffered) {
            fd_ = ::open(path.c_str(), flags | O_DIRECT);
            direct_ = fd_ >= 0;
        }
        if (fd_ < 0) fd_ = ::open(path.c_str(), flags);
        if (fd_ < 0) throw TargetError("cannot open " + path + ": " + std::strerror(errno));
        if (n_workers < 1) n_workers = 1;
        start_ = std::chrono::steady_clock::now();
        for (int i = 0; i < n_workers; ++i)
            workers_.emplace_back([this, max_request] { worker(max_request); });
    }

    FileDevice(const FileDevice&) = delete;
    FileDevice& operator=(const FileDevice&) = delete;

    ~FileDevice() override {
        {
            std::lock_guard<std::mutex> lk(mu_);
            stopping_ = true;
        }
        work_cv_.notify_all();
        for (auto& w : workers_) w.join();
        ::close(fd_);
    }

    bool direct_io() const { return direct_; }

    void submit(const IoRequest& req) override {
        {
            std::lock_guard<std::mutex> lk(mu_);
            pending_.push_back(req);
        }
        work_cv_.notify_one();
    }

    IoCompletion wait_one() override {
        std::unique_lock<std::mutex> lk(mu_);
        done_cv_.wait(lk, [this] { return !completed_.empty(); });
        IoCompletion c = std::move(completed_.front());
        completed_.pop_front();
        return c;
    }

    double now_s() override {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    void worker(std::uint64_t max_request) {
        void* raw = nullptr;
        if (posix_memalign(&raw, 4096, max_request) != 0) raw = nullptr;
        unsigned char* buf = static_cast<unsigned char*>(raw);
        if (buf && mode_ == Mode::write) std::memset(buf, 0x5a, max_request);
        for (;;) {
            IoRequest req;
            {
                std::unique_lock<std::mutex> lk(mu_);
                work_cv_.wait(lk, [this] { return stopping_ || !pending_.empty(); });
                if (pending_.empty()) break;  // stopping
                req = pending_.front();
                pending_.pop_front();
            }
            IoCompletion c;
            c.offset = req.offset;
            if (!buf) {
                c.ok = false;
                c.error = "buffer allocation failed";
            } else {
                c.bytes = transfer(buf, req, c);
            }
            {
                std::lock_guard<std::mutex> lk(mu_);
                completed_.push_back(std::move(c));
            }
            done_cv_.notify_one();
        }
        std::free(raw);
    }

    std::uint64_t transfer(unsigned char* buf, const IoRequest& req, IoCompletion& c) {
        std::uint64_t done = 0;
        while (done < req.bytes) {
            const std::size_t want = static_cast<std::size_t>(req.bytes - done);
            const off_t at = static_cast<off_t>(req.offset + done);
            const ssize_t n = mode_ == Mode::read ? ::pread(fd_, buf + done, want, at)
                                                  : ::pwrite(fd_, buf + done, want, at);
            if (n < 0) {
                if (errno == EINTR) continue;
                c.ok = false;
                c.error = std::strerror(errno);
                return done;
            }
            if (n == 0) {
                c.ok = false;
                c.error = "unexpected end of file";
                return done;
            }
            done += static_cast<std::uint64_t>(n);
        }
        return done;
    }

    int fd_ = -1;
    Mode mode_;
    bool direct_ = false;
    std::chrono::steady_clock::time_point start_;
    std::mutex mu_;
    std::condition_variable work_cv_, done_cv_;
    std::deque<IoRequest> pending_;
    std::deque<IoCompletion> completed_;
    bool stopping_ = false;
    std::vector<std::thread> workers_;
};

// Deterministic stand-in for a disk: one server, fixed service time per
// request, a virtual clock that only moves when a completion is collected,
// and a full submit/complete event log for the tests to replay.
class MockDevice : public AsyncDevice {
public:
    struct Event {
        double t = 0;
        bool is_submit = true;
        std::uint64_t offset = 0;
    };

    MockDevice(const SimDiskModel& model, Mode mode) : model_(model), mode_(mode) {
        model_.validate();
    }

    void submit(const IoRequest& req) override {
        log_.push_back({now_, true, req.offset});
        const double rate = disk_rate(model_, mode_);
        const double service =
            model_.overhead_s + static_cast<double>(req.bytes) / (rate * 1e6);
        const double done_t = std::max(now_, busy_until_) + service;
        busy_until_ = done_t;
        scheduled_.push_back({done_t, req});
    }

    IoCompletion wait_one() override {
        if (scheduled_.empty()) throw std::logic_error("wait with nothing in flight");
        auto [when, req] = scheduled_.front();
        scheduled_.pop_front();
        now_ = when;
        log_.push_back({now_, false, req.offset});
        IoCompletion c;
        c.offset = req.offset;
        c.bytes = req.bytes;
        return c;
    }

    double now_s() override { return now_; }

    const std::vector<Event>& events() const { return log_; }

private:
    SimDiskModel model_;
    Mode mode_;
    double now_ = 0;
    double busy_until_ = 0;
    std::deque<std::pair<double, IoRequest>> scheduled_;
    std::vector<Event> log_;
};

}  // namespace seqbench
