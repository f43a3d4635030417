#include "tierline/flashsim/sim.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <queue>
#include <vector>

namespace tierline::flashsim {

namespace {

using u8 = uint8_t;
using u16 = uint16_t;
using u32 = uint32_t;
using u64 = uint64_t;
using i64 = int64_t;

constexpr u32 kNone = UINT32_MAX;

i64 to_ns(double seconds) { return static_cast<i64>(std::llround(seconds * 1e9)); }

enum EventKind : u16 {
    kCaDoneHostRead,
    kCaDoneGcRead,
    kCaDoneProg,
    kSenseDoneHost,
    kSenseDoneGc,
    kDataDoneHostRead,
    kDataDoneGcRead,
    kDataDoneProg,
    kProgDone,
    kCompleteRead,
    kArrival,
};

struct Event {
    i64 t = 0;
    u64 seq = 0;
    u16 kind = 0;
    u32 a = 0;
    u32 b = 0;
};

struct EventLater {
    bool operator()(const Event& x, const Event& y) const {
        if (x.t != y.t) return x.t > y.t;
        return x.seq > y.seq;
    }
};

struct Block {
    u32 valid = 0;
    u32 write_ptr = 0;     // next unit slot
    u16 pending_progs = 0; // programs targeting this block still in flight
    bool is_free = true;
    bool is_open = false;
};

struct Request {
    u32 unit = 0;
    u32 plane = 0;       // reads only
    i64 submit_ns = 0;
    i64 ecc_extra_ns = 0;
    u32 transfer_b = 0;  // reads only
    bool is_read = true;
    bool in_use = false;
};

struct GcRead {
    u32 ch = 0;
    u32 plane = 0;
    u32 victim = 0;
    u32 page = 0;
};

struct Prog {
    u32 ch = 0;
    u32 plane = 0;
    u32 block = 0;
    u32 base_slot = 0;
    bool is_gc = false;
    std::vector<u32> host_slots;           // host programs
    std::vector<std::pair<u32, u32>> relocs; // gc programs: (unit, old_phys)
};

struct ChannelState {
    bool ca_busy = false;
    bool data_busy = false;
    std::deque<u32> host_read_q; // request slots waiting for a CA grant
    std::deque<u32> gc_read_q;   // GcRead ids
    std::deque<u32> prog_q;      // Prog ids waiting for CA
    std::deque<u32> host_xfer_q; // request slots ready to move data
    std::deque<u32> gc_xfer_q;   // GcRead ids ready to move data
    std::deque<u32> prog_data_q; // Prog ids ready for data-in
    std::vector<u32> write_buf;  // request slots buffered until a page fills
    std::deque<std::vector<u32>> stalled_pages; // formed pages awaiting a block
    std::vector<std::pair<u32, u32>> gc_buf;     // (unit, old_phys) awaiting program
    u32 free_blocks = 0;
    u32 gc_victim = kNone;
    u32 gc_reads_outstanding = 0;
    u32 gc_units_outstanding = 0;
    u32 alloc_rr = 0;
    i64 ca_busy_ns = 0;
    i64 data_busy_ns = 0;
};

class Simulator {
  public:
    explicit Simulator(const SimConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
        cfg_.validate();
        build_geometry();
        age_address_space();
    }

  private:
    // --- geometry -----------------------------------------------------
    SimConfig cfg_;
    Rng rng_;
    u32 channels_ = 0, dies_ = 0, planes_per_die_ = 0;
    u32 planes_per_channel_ = 0, planes_total_ = 0;
    u32 units_per_page_ = 0, units_per_block_ = 0, blocks_per_plane_ = 0;
    u32 blocks_total_ = 0, blocks_per_channel_ = 0;
    u64 logical_units_ = 0;
    u32 sectors_per_unit_ = 0;
    u32 gc_trigger_blocks_ = 0;
    i64 tau_cmd_ = 0, tau_sense_ = 0, tau_prog_ = 0;
    i64 unit_xfer_ = 0, page_xfer_ = 0;

    std::vector<u32> map_;   // logical unit -> phys slot
    std::vector<u32> rmap_;  // phys slot -> logical unit
    std::vector<Block> blocks_;
    std::vector<std::vector<u32>> plane_free_;  // free block ids per plane
    std::vector<u32> host_open_, gc_open_;      // open block per plane
    std::vector<u8> plane_busy_;
    std::vector<i64> plane_reserved_at_;
    std::vector<i64> plane_busy_ns_;
    std::vector<ChannelState> ch_;

    std::vector<Request> reqs_;
    std::vector<u32> req_free_;
    std::vector<GcRead> gc_reads_;
    std::vector<u32> gc_read_free_;
    std::vector<Prog> progs_;
    std::vector<u32> prog_free_;

    std::priority_queue<Event, std::vector<Event>, EventLater> pq_;
    u64 seq_ = 0;
    i64 now_ = 0;
    i64 warmup_ns_ = 0, end_ns_ = 0;
    i64 link_free_at_ = 0;

    // window statistics
    u64 done_reads_ = 0, done_writes_ = 0;
    u64 host_units_w_ = 0, gc_units_w_ = 0;
    u64 escalations_ = 0;
    std::vector<double> latencies_;
    double read_frac_ = 1.0;

    u32 block_plane(u32 block) const { return block / blocks_per_plane_; }
    u32 plane_channel(u32 plane) const { return plane / planes_per_channel_; }
    u32 phys_block(u32 phys) const { return phys / units_per_block_; }

    void build_geometry() {
        const auto& ssd = cfg_.ssd;
        channels_ = ssd.n_channels;
        dies_ = ssd.dies_per_channel;
        planes_per_die_ = ssd.chip.n_plane;
        planes_per_channel_ = dies_ * planes_per_die_;
        planes_total_ = channels_ * planes_per_channel_;

        const u64 blk = cfg_.mix.block_size_b;
        units_per_page_ = static_cast<u32>(ssd.chip.page_size_b / blk);
        units_per_block_ = units_per_page_ * cfg_.pages_per_block;
        logical_units_ = cfg_.address_space_b / blk;
        sectors_per_unit_ = static_cast<u32>(blk / 512);

        const double phys_units =
            static_cast<double>(logical_units_) * (1.0 + cfg_.gc.over_provisioning);
        const u64 want_blocks =
            static_cast<u64>(std::ceil(phys_units / units_per_block_));
        blocks_per_plane_ =
            static_cast<u32>((want_blocks + planes_total_ - 1) / planes_total_);
        if (blocks_per_plane_ < 4)
            throw ConfigError("address space too small for the geometry; "
                              "increase address_space or shrink pages_per_block");
        blocks_total_ = blocks_per_plane_ * planes_total_;
        blocks_per_channel_ = blocks_per_plane_ * planes_per_channel_;
        gc_trigger_blocks_ = std::max<u32>(
            2, static_cast<u32>(std::ceil(cfg_.gc.trigger_free_fraction *
                                          blocks_per_channel_)));

        tau_cmd_ = to_ns(ssd.channel.tau_cmd_s);
        tau_sense_ = to_ns(ssd.chip.tau_sense_s);
        tau_prog_ = to_ns(ssd.chip.tau_prog_s);
        unit_xfer_ = std::max<i64>(1, to_ns(blk / ssd.channel.bandwidth_bps));
        page_xfer_ = std::max<i64>(
            1, to_ns(static_cast<double>(ssd.chip.page_size_b) / ssd.channel.bandwidth_bps));

        map_.assign(logical_units_, kNone);
        rmap_.assign(static_cast<size_t>(blocks_total_) * units_per_block_, kNone);
        blocks_.assign(blocks_total_, Block{});
        plane_free_.assign(planes_total_, {});
        host_open_.assign(planes_total_, kNone);
        gc_open_.assign(planes_total_, kNone);
        plane_busy_.assign(planes_total_, 0);
        plane_reserved_at_.assign(planes_total_, 0);
        plane_busy_ns_.assign(planes_total_, 0);
        ch_.assign(channels_, ChannelState{});

        for (u32 b = 0; b < blocks_total_; ++b)
            plane_free_[block_plane(b)].push_back(b);
        // pop order: highest id first keeps allocation deterministic
        for (auto& v : plane_free_) std::reverse(v.begin(), v.end());
        for (u32 c = 0; c < channels_; ++c) ch_[c].free_blocks = blocks_per_channel_;

        if (std::isinf(cfg_.mix.read_write_ratio))
            read_frac_ = 1.0;
        else
            read_frac_ = cfg_.mix.read_write_ratio / (cfg_.mix.read_write_ratio + 1.0);
    }

    // --- allocation ---------------------------------------------------
    // Returns block id with a whole free page reserved, or kNone.
    u32 alloc_page(u32 chan, bool is_gc, u32* base_slot) {
        auto& st = ch_[chan];
        auto& open = is_gc ? gc_open_ : host_open_;
        for (u32 i = 0; i < planes_per_channel_; ++i) {
            const u32 plane = chan * planes_per_channel_ +
                              (st.alloc_rr + i) % planes_per_channel_;
            u32 blk = open[plane];
            if (blk != kNone && blocks_[blk].write_ptr >= units_per_block_) {
                blocks_[blk].is_open = false; // retired open block
                open[plane] = blk = kNone;
            }
            if (blk == kNone) {
                // keep one free block per channel in reserve for GC
                if (plane_free_[plane].empty()) continue;
                if (!is_gc && st.free_blocks <= 1) continue;
                blk = plane_free_[plane].back();
                plane_free_[plane].pop_back();
                st.free_blocks--;
                blocks_[blk].is_free = false;
                blocks_[blk].is_open = true;
                blocks_[blk].write_ptr = 0;
                blocks_[blk].valid = 0;
                open[plane] = blk;
            }
            auto& b = blocks_[blk];
            *base_slot = b.write_ptr;
            b.write_ptr += units_per_page_;
            if (b.write_ptr >= units_per_block_) {
                b.is_open = false;
                open[plane] = kNone;
            }
            st.alloc_rr = (st.alloc_rr + i + 1) % planes_per_channel_;
            return blk;
        }
        return kNone;
    }

    void invalidate(u32 phys) {
        const u32 blk = phys_block(phys);
        assert(blocks_[blk].valid > 0);
        blocks_[blk].valid--;
        rmap_[phys] = kNone;
    }

    void commit_place(u32 unit, u32 phys) {
        const u32 old = map_[unit];
        if (old != kNone) invalidate(old);
        map_[unit] = phys;
        rmap_[phys] = unit;
        blocks_[phys_block(phys)].valid++;
    }

    // --- state-only pre-aging ------------------------------------------
    // Fills the whole address space in random order and churns it with
    // uniform overwrites so GC starts from a uniformly aged steady state.
    std::vector<u32> age_buf_;
    u32 age_rr_ = 0;

    void age_place_page(u32 chan, const u32* units, u32 n) {
        u32 base = 0;
        u32 blk = alloc_page(chan, false, &base);
        if (blk == kNone) {
            state_gc(chan, true);
            blk = alloc_page(chan, false, &base);
            if (blk == kNone) throw ConfigError("aging ran out of flash blocks");
        }
        const u32 phys0 = blk * units_per_block_ + base;
        for (u32 i = 0; i < n; ++i) commit_place(units[i], phys0 + i);
        state_gc(chan, false);
    }

    void age_push(u32 unit) {
        const u32 chan = age_rr_++ % channels_;
        age_buf_[static_cast<size_t>(chan) * units_per_page_ +
                 age_fill_[chan]++] = unit;
        if (age_fill_[chan] == units_per_page_) {
            age_place_page(chan, &age_buf_[static_cast<size_t>(chan) * units_per_page_],
                           units_per_page_);
            age_fill_[chan] = 0;
        }
    }

    std::vector<u32> age_fill_;

    u32 select_victim(u32 chan) const {
        const u32 first = chan * blocks_per_channel_;
        u32 best = kNone, best_valid = kNone;
        for (u32 b = first; b < first + blocks_per_channel_; ++b) {
            const auto& blk = blocks_[b];
            if (blk.is_free || blk.is_open || blk.pending_progs > 0) continue;
            if (blk.write_ptr < units_per_block_) continue; // not fully written
            if (blk.valid < best_valid) {
                best_valid = blk.valid;
                best = b;
            }
        }
        return best;
    }

    void erase_block(u32 blk) {
        auto& b = blocks_[blk];
        assert(b.valid == 0);
        const u32 plane = block_plane(blk);
        b.is_free = true;
        b.write_ptr = 0;
        plane_free_[plane].push_back(blk);
        ch_[plane_channel(plane)].free_blocks++;
    }

    void state_gc(u32 chan, bool force) {
        auto& st = ch_[chan];
        std::vector<u32> moved;
        while (st.free_blocks < gc_trigger_blocks_ || (force && st.free_blocks == 0)) {
            const u32 victim = select_victim(chan);
            if (victim == kNone) break;
            moved.clear();
            const u32 phys0 = victim * units_per_block_;
            for (u32 s = 0; s < units_per_block_; ++s) {
                const u32 unit = rmap_[phys0 + s];
                if (unit != kNone) moved.push_back(unit);
            }
            // release the victim first so its space is reusable
            for (const u32 unit : moved) invalidate(map_[unit]), map_[unit] = kNone;
            erase_block(victim);
            for (size_t i = 0; i < moved.size();) {
                const u32 n =
                    std::min<size_t>(units_per_page_, moved.size() - i);
                u32 base = 0;
                u32 blk = alloc_page(chan, true, &base);
                if (blk == kNone) throw ConfigError("GC ran out of flash blocks");
                const u32 p0 = blk * units_per_block_ + base;
                for (u32 j = 0; j < n; ++j) commit_place(moved[i + j], p0 + j);
                i += n;
            }
            if (force && st.free_blocks > 0) force = false;
        }
    }

    void age_address_space() {
        age_buf_.assign(static_cast<size_t>(channels_) * units_per_page_, 0);
        age_fill_.assign(channels_, 0);

        std::vector<u32> perm(logical_units_);
        for (u64 i = 0; i < logical_units_; ++i) perm[i] = static_cast<u32>(i);
        for (u64 i = logical_units_; i > 1; --i) {
            const u64 j = rng_.next_below(i);
            std::swap(perm[i - 1], perm[j]);
        }
        for (const u32 unit : perm) age_push(unit);

        const u64 churn =
            static_cast<u64>(cfg_.aging_churn * static_cast<double>(logical_units_));
        for (u64 i = 0; i < churn; ++i)
            age_push(static_cast<u32>(rng_.next_below(logical_units_)));

        // flush partial per-channel pages so every mapped unit is committed
        for (u32 c = 0; c < channels_; ++c) {
            if (age_fill_[c] > 0) {
                age_place_page(c, &age_buf_[static_cast<size_t>(c) * units_per_page_],
                               age_fill_[c]);
                age_fill_[c] = 0;
            }
        }
    }

    // --- event plumbing -------------------------------------------------
    void schedule(i64 t, u16 kind, u32 a, u32 b) {
        pq_.push(Event{t, seq_++, kind, a, b});
    }

    bool in_window(i64 t) const { return t >= warmup_ns_; }

    void reserve_plane(u32 plane) {
        plane_busy_[plane] = 1;
        plane_reserved_at_[plane] = now_;
    }

    void release_plane(u32 plane) {
        plane_busy_[plane] = 0;
        if (in_window(plane_reserved_at_[plane]))
            plane_busy_ns_[plane] += now_ - plane_reserved_at_[plane];
    }

    void grant_ca(u32 chan, i64 dur, u16 done_kind, u32 payload) {
        auto& st = ch_[chan];
        st.ca_busy = true;
        if (in_window(now_)) st.ca_busy_ns += dur;
        schedule(now_ + dur, done_kind, chan, payload);
    }

    void grant_data(u32 chan, i64 dur, u16 done_kind, u32 payload) {
        auto& st = ch_[chan];
        st.data_busy = true;
        if (in_window(now_)) st.data_busy_ns += dur;
        schedule(now_ + dur, done_kind, chan, payload);
    }

    bool grant_host_read(u32 chan) {
        auto& st = ch_[chan];
        for (auto it = st.host_read_q.begin(); it != st.host_read_q.end(); ++it) {
            const u32 slot = *it;
            if (!plane_busy_[reqs_[slot].plane]) {
                st.host_read_q.erase(it);
                reserve_plane(reqs_[slot].plane);
                grant_ca(chan, tau_cmd_, kCaDoneHostRead, slot);
                return true;
            }
        }
        return false;
    }

    bool grant_gc_read(u32 chan) {
        auto& st = ch_[chan];
        for (auto it = st.gc_read_q.begin(); it != st.gc_read_q.end(); ++it) {
            const u32 id = *it;
            if (!plane_busy_[gc_reads_[id].plane]) {
                st.gc_read_q.erase(it);
                reserve_plane(gc_reads_[id].plane);
                grant_ca(chan, tau_cmd_, kCaDoneGcRead, id);
                return true;
            }
        }
        return false;
    }

    bool grant_prog(u32 chan) {
        auto& st = ch_[chan];
        for (auto it = st.prog_q.begin(); it != st.prog_q.end(); ++it) {
            const u32 id = *it;
            if (!plane_busy_[progs_[id].plane]) {
                st.prog_q.erase(it);
                reserve_plane(progs_[id].plane);
                grant_ca(chan, tau_cmd_, kCaDoneProg, id);
                return true;
            }
        }
        return false;
    }

    void try_ca(u32 chan) {
        auto& st = ch_[chan];
        if (st.ca_busy) return;
        // Reads bypass queued programs, but once the free pool runs critically
        // low the reclaim path must jump ahead or writes starve it out.
        const bool urgent = st.free_blocks <= std::max<u32>(1, gc_trigger_blocks_ / 2);
        if (urgent) {
            if (grant_gc_read(chan)) return;
            if (grant_prog(chan)) return;
            grant_host_read(chan);
            return;
        }
        if (grant_host_read(chan)) return;
        if (grant_gc_read(chan)) return;
        grant_prog(chan);
    }

    void try_data(u32 chan) {
        auto& st = ch_[chan];
        if (st.data_busy) return;
        if (!st.host_xfer_q.empty()) {
            const u32 slot = st.host_xfer_q.front();
            st.host_xfer_q.pop_front();
            const i64 dur = std::max<i64>(
                1, to_ns(reqs_[slot].transfer_b / cfg_.ssd.channel.bandwidth_bps));
            grant_data(chan, dur, kDataDoneHostRead, slot);
            return;
        }
        if (!st.gc_xfer_q.empty()) {
            const u32 id = st.gc_xfer_q.front();
            st.gc_xfer_q.pop_front();
            grant_data(chan, page_xfer_, kDataDoneGcRead, id);
            return;
        }
        if (!st.prog_data_q.empty()) {
            const u32 id = st.prog_data_q.front();
            st.prog_data_q.pop_front();
            grant_data(chan, page_xfer_, kDataDoneProg, id);
            return;
        }
    }

    // --- request lifecycle ----------------------------------------------
    u32 alloc_req() {
        if (req_free_.empty()) {
            reqs_.push_back(Request{});
            return static_cast<u32>(reqs_.size() - 1);
        }
        const u32 id = req_free_.back();
        req_free_.pop_back();
        return id;
    }

    void submit_new(u32 slot) {
        auto& r = reqs_[slot];
        r.in_use = true;
        r.submit_ns = now_;
        r.ecc_extra_ns = 0;
        r.is_read = read_frac_ >= 1.0 || rng_.next_unit() <= read_frac_;
        r.unit = static_cast<u32>(rng_.next_below(logical_units_));
        if (r.is_read) {
            const u32 phys = map_[r.unit];
            const u32 plane = block_plane(phys_block(phys));
            r.plane = plane;
            r.transfer_b = static_cast<u32>(cfg_.mix.block_size_b);
            const u32 chan = plane_channel(plane);
            ch_[chan].host_read_q.push_back(slot);
            try_ca(chan);
        } else {
            const u32 chan = age_rr_++ % channels_;
            ch_[chan].write_buf.push_back(slot);
            if (ch_[chan].write_buf.size() >= units_per_page_) {
                flush_writes(chan);
                check_gc(chan);
            }
        }
    }

    void flush_writes(u32 chan) {
        auto& st = ch_[chan];
        while (st.write_buf.size() >= units_per_page_) {
            std::vector<u32> page(st.write_buf.begin(),
                                  st.write_buf.begin() + units_per_page_);
            st.write_buf.erase(st.write_buf.begin(),
                               st.write_buf.begin() + units_per_page_);
            st.stalled_pages.push_back(std::move(page));
        }
        drain_stalled(chan);
    }

    void drain_stalled(u32 chan) {
        auto& st = ch_[chan];
        while (!st.stalled_pages.empty()) {
            u32 base = 0;
            const u32 blk = alloc_page(chan, false, &base);
            if (blk == kNone) break;
            const u32 id = alloc_prog();
            auto& p = progs_[id];
            p.ch = chan;
            p.plane = block_plane(blk);
            p.block = blk;
            p.base_slot = base;
            p.is_gc = false;
            p.host_slots = std::move(st.stalled_pages.front());
            st.stalled_pages.pop_front();
            blocks_[blk].pending_progs++;
            st.prog_q.push_back(id);
            try_ca(chan);
        }
    }

    u32 alloc_prog() {
        if (prog_free_.empty()) {
            progs_.push_back(Prog{});
            return static_cast<u32>(progs_.size() - 1);
        }
        const u32 id = prog_free_.back();
        prog_free_.pop_back();
        return id;
    }

    u32 alloc_gc_read() {
        if (gc_read_free_.empty()) {
            gc_reads_.push_back(GcRead{});
            return static_cast<u32>(gc_reads_.size() - 1);
        }
        const u32 id = gc_read_free_.back();
        gc_read_free_.pop_back();
        return id;
    }

    // --- garbage collection -----------------------------------------------
    void check_gc(u32 chan) {
        auto& st = ch_[chan];
        if (st.gc_victim != kNone) return;
        while (st.free_blocks < gc_trigger_blocks_) {
            const u32 victim = select_victim(chan);
            if (victim == kNone) return;
            if (blocks_[victim].valid == 0) {
                erase_block(victim);
                drain_stalled(chan);
                continue;
            }
            st.gc_victim = victim;
            st.gc_reads_outstanding = 0;
            st.gc_units_outstanding = 0;
            const u32 phys0 = victim * units_per_block_;
            for (u32 pg = 0; pg < cfg_.pages_per_block; ++pg) {
                bool any_valid = false;
                for (u32 s = 0; s < units_per_page_; ++s)
                    if (rmap_[phys0 + pg * units_per_page_ + s] != kNone) {
                        any_valid = true;
                        break;
                    }
                if (!any_valid) continue;
                const u32 id = alloc_gc_read();
                gc_reads_[id] = {chan, block_plane(victim), victim, pg};
                st.gc_read_q.push_back(id);
                st.gc_reads_outstanding++;
            }
            if (st.gc_reads_outstanding == 0) { // raced to empty
                st.gc_victim = kNone;
                erase_block(victim);
                drain_stalled(chan);
                continue;
            }
            try_ca(chan);
            return;
        }
    }

    void form_gc_progs(u32 chan, bool flush_partial) {
        auto& st = ch_[chan];
        while (st.gc_buf.size() >= units_per_page_ ||
               (flush_partial && !st.gc_buf.empty())) {
            const u32 n = static_cast<u32>(
                std::min<size_t>(units_per_page_, st.gc_buf.size()));
            u32 base = 0;
            const u32 blk = alloc_page(chan, true, &base);
            if (blk == kNone)
                throw ConfigError("GC cannot allocate a page; raise over_provisioning");
            const u32 id = alloc_prog();
            auto& p = progs_[id];
            p.ch = chan;
            p.plane = block_plane(blk);
            p.block = blk;
            p.base_slot = base;
            p.is_gc = true;
            p.relocs.assign(st.gc_buf.begin(), st.gc_buf.begin() + n);
            st.gc_buf.erase(st.gc_buf.begin(), st.gc_buf.begin() + n);
            blocks_[blk].pending_progs++;
            st.prog_q.push_back(id);
            try_ca(chan);
            if (st.gc_buf.empty()) break;
        }
    }

    void finish_gc_victim(u32 chan) {
        auto& st = ch_[chan];
        if (st.gc_victim == kNone) return;
        if (st.gc_reads_outstanding > 0 || st.gc_units_outstanding > 0) return;
        if (!st.gc_buf.empty()) return;
        const u32 victim = st.gc_victim;
        st.gc_victim = kNone;
        erase_block(victim);
        drain_stalled(chan);
        check_gc(chan);
    }

    // --- completion & stats -----------------------------------------------
    void complete_request(u32 slot, i64 when) {
        auto& r = reqs_[slot];
        if (in_window(when)) {
            (r.is_read ? done_reads_ : done_writes_)++;
            latencies_.push_back(static_cast<double>(when - r.submit_ns) * 1e-9);
        }
        r.in_use = false;
        if (cfg_.arrival == ArrivalModel::closed_loop)
            submit_new(slot);
        else
            req_free_.push_back(slot);
    }

    // --- handlers ----------------------------------------------------------
    void on_ca_done_host_read(u32 chan, u32 slot) {
        ch_[chan].ca_busy = false;
        schedule(now_ + tau_sense_, kSenseDoneHost, chan, slot);
        try_ca(chan);
    }

    void on_ca_done_gc_read(u32 chan, u32 id) {
        ch_[chan].ca_busy = false;
        schedule(now_ + tau_sense_, kSenseDoneGc, chan, id);
        try_ca(chan);
    }

    void on_ca_done_prog(u32 chan, u32 id) {
        ch_[chan].ca_busy = false;
        ch_[chan].prog_data_q.push_back(id);
        try_data(chan);
        try_ca(chan);
    }

    void on_sense_done_host(u32 chan, u32 slot) {
        auto& r = reqs_[slot];
        if (cfg_.ecc.bch_fail_prob > 0.0) {
            const EccOutcome out = ecc_read_path(sectors_per_unit_, cfg_.ecc, rng_);
            r.transfer_b = static_cast<u32>(cfg_.mix.block_size_b) +
                           static_cast<u32>(out.extra_transfer_b);
            r.ecc_extra_ns = to_ns(out.extra_latency_s);
            if (in_window(now_)) escalations_ += out.escalations;
        } else {
            // error-free plateau reference: decode fully pipelined
            r.ecc_extra_ns = 0;
        }
        ch_[chan].host_xfer_q.push_back(slot);
        try_data(chan);
    }

    void on_sense_done_gc(u32 chan, u32 id) {
        ch_[chan].gc_xfer_q.push_back(id);
        try_data(chan);
    }

    void on_data_done_host_read(u32 chan, u32 slot) {
        auto& st = ch_[chan];
        st.data_busy = false;
        release_plane(reqs_[slot].plane);
        // aggregate host-link drain; adds latency only above link capacity
        const i64 link_ns = std::max<i64>(
            1, to_ns(reqs_[slot].transfer_b / cfg_.host_link_bps));
        const i64 ready = std::max(now_, link_free_at_) + link_ns;
        link_free_at_ = ready;
        schedule(ready + reqs_[slot].ecc_extra_ns, kCompleteRead, chan, slot);
        try_data(chan);
        try_ca(chan);
    }

    void on_data_done_gc_read(u32 chan, u32 id) {
        auto& st = ch_[chan];
        st.data_busy = false;
        const auto gr = gc_reads_[id];
        gc_read_free_.push_back(id);
        release_plane(gr.plane);
        const u32 phys0 = gr.victim * units_per_block_ + gr.page * units_per_page_;
        for (u32 s = 0; s < units_per_page_; ++s) {
            const u32 unit = rmap_[phys0 + s];
            if (unit == kNone) continue; // invalidated while queued
            st.gc_buf.emplace_back(unit, phys0 + s);
            st.gc_units_outstanding++;
        }
        st.gc_reads_outstanding--;
        form_gc_progs(chan, st.gc_reads_outstanding == 0);
        finish_gc_victim(chan);
        try_data(chan);
        try_ca(chan);
    }

    void on_data_done_prog(u32 chan, u32 id) {
        ch_[chan].data_busy = false;
        schedule(now_ + tau_prog_, kProgDone, chan, id);
        try_data(chan);
    }

    void on_prog_done(u32 chan, u32 id) {
        auto& p = progs_[id];
        auto& st = ch_[chan];
        const u32 phys0 = p.block * units_per_block_ + p.base_slot;
        blocks_[p.block].pending_progs--;
        if (p.is_gc) {
            u32 i = 0;
            for (const auto& [unit, old_phys] : p.relocs) {
                if (map_[unit] == old_phys) {
                    commit_place(unit, phys0 + i);
                    if (in_window(now_)) gc_units_w_++;
                }
                st.gc_units_outstanding--;
                ++i;
            }
            p.relocs.clear();
        } else {
            u32 i = 0;
            for (const u32 slot : p.host_slots) {
                commit_place(reqs_[slot].unit, phys0 + i);
                if (in_window(now_)) host_units_w_++;
                ++i;
            }
            auto slots = std::move(p.host_slots);
            p.host_slots.clear();
            for (const u32 slot : slots) complete_request(slot, now_);
        }
        release_plane(p.plane);
        prog_free_.push_back(id);
        check_gc(chan);
        finish_gc_victim(chan);
        try_ca(chan);
    }

    void on_arrival() {
        const u32 slot = alloc_req();
        submit_new(slot);
        schedule(now_ + to_ns(rng_.next_exponential(cfg_.poisson_rate_iops)),
                 kArrival, 0, 0);
    }

  public:
    SimResult run_impl(LatencyPercentiles* percentiles) {
        const double warmup =
            cfg_.warmup_s >= 0.0 ? cfg_.warmup_s : 0.2 * cfg_.duration_s;
        warmup_ns_ = to_ns(warmup);
        end_ns_ = warmup_ns_ + to_ns(cfg_.duration_s);
        latencies_.reserve(1u << 20);

        if (cfg_.arrival == ArrivalModel::closed_loop) {
            const u32 n = cfg_.queue_count * cfg_.queue_depth;
            reqs_.resize(n);
            for (u32 s = 0; s < n; ++s) submit_new(s);
        } else {
            schedule(to_ns(rng_.next_exponential(cfg_.poisson_rate_iops)), kArrival,
                     0, 0);
        }

        while (!pq_.empty()) {
            const Event e = pq_.top();
            if (e.t >= end_ns_) break;
            pq_.pop();
            now_ = e.t;
            switch (e.kind) {
                case kCaDoneHostRead: on_ca_done_host_read(e.a, e.b); break;
                case kCaDoneGcRead: on_ca_done_gc_read(e.a, e.b); break;
                case kCaDoneProg: on_ca_done_prog(e.a, e.b); break;
                case kSenseDoneHost: on_sense_done_host(e.a, e.b); break;
                case kSenseDoneGc: on_sense_done_gc(e.a, e.b); break;
                case kDataDoneHostRead: on_data_done_host_read(e.a, e.b); break;
                case kDataDoneGcRead: on_data_done_gc_read(e.a, e.b); break;
                case kDataDoneProg: on_data_done_prog(e.a, e.b); break;
                case kProgDone: on_prog_done(e.a, e.b); break;
                case kCompleteRead: complete_request(e.b, e.t); break;
                case kArrival: on_arrival(); break;
                default: break;
            }
        }

        SimResult res;
        res.ios_completed = done_reads_ + done_writes_;
        res.reads_completed = done_reads_;
        res.writes_completed = done_writes_;
        res.achieved_iops = static_cast<double>(res.ios_completed) / cfg_.duration_s;
        if (!latencies_.empty()) {
            double sum = 0.0;
            for (const double v : latencies_) sum += v;
            res.latency_mean_s = sum / static_cast<double>(latencies_.size());
            std::vector<double> sorted = latencies_;
            const size_t idx = static_cast<size_t>(
                std::min<double>(sorted.size() - 1.0,
                                 std::ceil(0.99 * sorted.size()) - 1.0));
            std::nth_element(sorted.begin(), sorted.begin() + idx, sorted.end());
            res.latency_p99_s = sorted[idx];
            if (percentiles) {
                percentiles->percentile_s.assign(101, 0.0);
                std::sort(sorted.begin(), sorted.end());
                for (int p = 1; p <= 100; ++p) {
                    const size_t i = static_cast<size_t>(
                        std::min<double>(sorted.size() - 1.0,
                                         std::ceil(p / 100.0 * sorted.size()) - 1.0));
                    percentiles->percentile_s[p] = sorted[i];
                }
            }
        }
        const double window = cfg_.duration_s;
        i64 data_ns = 0, ca_ns = 0, plane_ns = 0;
        for (const auto& st : ch_) {
            data_ns += st.data_busy_ns;
            ca_ns += st.ca_busy_ns;
        }
        for (const i64 v : plane_busy_ns_) plane_ns += v;
        res.channel_utilization =
            static_cast<double>(data_ns) * 1e-9 / (channels_ * window);
        res.ca_utilization = static_cast<double>(ca_ns) * 1e-9 / (channels_ * window);
        res.die_utilization =
            static_cast<double>(plane_ns) * 1e-9 / (planes_total_ * window);
        res.measured_waf =
            host_units_w_ == 0
                ? 1.0
                : static_cast<double>(host_units_w_ + gc_units_w_) /
                      static_cast<double>(host_units_w_);
        res.ecc_escalations = escalations_;
        return res;
    }
};

} // namespace

void SimConfig::validate() const {
    ssd.validate();
    mix.validate();
    if (mix.block_size_b > ssd.chip.page_size_b)
        throw ConfigError("simulator requires block_size <= page_size");
    if (ssd.chip.page_size_b % mix.block_size_b != 0)
        throw ConfigError("block_size must divide page_size");
    if (queue_count * queue_depth < 1 && arrival == ArrivalModel::closed_loop)
        throw ConfigError("closed loop needs queue_count*queue_depth >= 1");
    if (arrival == ArrivalModel::poisson && poisson_rate_iops <= 0.0)
        throw ConfigError("poisson arrivals need a positive rate");
    if (duration_s <= 0.0) throw ConfigError("duration must be > 0");
    if (gc.trigger_free_fraction <= 0.0 || gc.trigger_free_fraction >= 1.0)
        throw ConfigError("gc trigger fraction must lie in (0,1)");
    if (gc.over_provisioning <= 0.0)
        throw ConfigError("over_provisioning must be > 0");
    if (ecc.bch_fail_prob < 0.0 || ecc.bch_fail_prob > 1.0)
        throw ConfigError("bch_fail_prob must lie in [0,1]");
    if (pages_per_block < 1) throw ConfigError("pages_per_block must be >= 1");
    if (address_space_b < mix.block_size_b * 1024)
        throw ConfigError("address space too small");
    if (host_link_bps <= 0.0) throw ConfigError("host link bandwidth must be > 0");
    if (aging_churn < 0.0) throw ConfigError("aging_churn must be >= 0");
}

EccOutcome ecc_read_path(uint32_t request_sectors, const EccConfig& ecc, Rng& rng) {
    if (request_sectors == 0) throw ConfigError("request must cover >= 1 sector");
    EccOutcome out;
    constexpr u32 kSectorsPerCodeword = 8; // 8 x 512B under one outer codeword
    u32 remaining = request_sectors;
    while (remaining > 0) {
        const u32 in_cw = std::min(remaining, kSectorsPerCodeword);
        bool failed = false;
        for (u32 s = 0; s < in_cw; ++s)
            if (ecc.bch_fail_prob > 0.0 && rng.next_unit() <= ecc.bch_fail_prob)
                failed = true;
        if (failed) {
            out.escalations++;
            out.extra_transfer_b += 4096 - 512ull * in_cw;
            out.extra_latency_s += ecc.ldpc_base_latency_s +
                                   ecc.mean_iterations * ecc.ldpc_per_iteration_latency_s;
        } else {
            out.extra_latency_s += ecc.bch_decode_latency_s;
        }
        remaining -= in_cw;
    }
    return out;
}

SimResult run_sim_with_percentiles(const SimConfig& config,
                                   LatencyPercentiles* percentiles) {
    Simulator sim(config);
    return sim.run_impl(percentiles);
}

SimResult run_sim(const SimConfig& config) {
    return run_sim_with_percentiles(config, nullptr);
}

ModelComparison validate_against_model(const SimConfig& config) {
    ModelComparison out;
    out.model_peak_iops = ssd_peak_iops(config.ssd, config.mix);
    out.sim = run_sim(config);
    out.sim_iops = out.sim.achieved_iops;
    out.ratio = out.sim_iops / out.model_peak_iops;
    return out;
}

} // namespace tierline::flashsim
