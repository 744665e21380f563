#include "mvmol/views/embed.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_map>

namespace mvmol::views {
namespace {

bool retryable(const EmbedError& e) {
  switch (e.kind()) {
    case EmbedErrorKind::RateLimited:
    case EmbedErrorKind::ProviderUnreachable: return true;
    case EmbedErrorKind::ProviderError: return e.status() >= 500;
    default: return false;
  }
}

}  // namespace

Embedder::Embedder(EmbeddingProvider& provider, EmbeddingCache* cache, EmbedOptions options)
    : provider_(provider), cache_(cache), options_(std::move(options)) {
  if (options_.batch_size == 0) options_.batch_size = 1;
  if (options_.max_in_flight == 0) options_.max_in_flight = 1;
  if (!options_.sleep) options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  if (cache_) dim_ = cache_->known_dim(provider_.provider_id(), provider_.model_id());
}

void Embedder::check_dim(std::size_t dim) {
  if (dim == 0) throw EmbedError(EmbedErrorKind::DimMismatch, "provider returned an empty vector");
  if (!dim_) {
    dim_ = dim;
  } else if (*dim_ != dim) {
    throw EmbedError(EmbedErrorKind::DimMismatch,
                     "model " + provider_.model_id() + " returned dim " + std::to_string(dim) +
                         ", earlier responses had dim " + std::to_string(*dim_));
  }
}

std::vector<std::vector<double>> Embedder::call_with_retry(std::span<const std::string> batch) {
  for (std::size_t attempt = 0;; ++attempt) {
    try {
      {
        std::lock_guard lock(stats_mutex());
        ++stats_.remote_calls;
      }
      return provider_.embed_batch(batch);
    } catch (const EmbedError& e) {
      if (!retryable(e)) throw;
      if (attempt >= options_.max_retries) {
        throw EmbedError(e.kind(), std::string(e.what()) + " (gave up after " +
                                       std::to_string(options_.max_retries) + " retries)",
                         e.status(), e.retry_after());
      }
      std::chrono::milliseconds wait = options_.backoff_cap;
      if (e.retry_after()) {
        wait = std::min(*e.retry_after(), options_.backoff_cap);
      } else if (attempt < 32) {
        wait = std::min(options_.backoff_base * (std::int64_t{1} << attempt), options_.backoff_cap);
      }
      {
        std::lock_guard lock(stats_mutex());
        ++stats_.retries;
      }
      options_.sleep(wait);
    }
  }
}

std::vector<ViewEmbedding> Embedder::embed(std::span<const std::string> prompts, View view) {
  const std::string provider_id = provider_.provider_id();
  const std::string model_id = provider_.model_id();
  std::vector<ViewEmbedding> out(prompts.size());
  stats_.prompts += prompts.size();

  // Distinct uncached prompts, first occurrence order.
  std::vector<std::size_t> pending;
  std::unordered_map<std::string_view, std::size_t> first_seen;
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    ViewEmbedding& e = out[i];
    e.provider_id = provider_id;
    e.model_id = model_id;
    e.prompt_hash = sha256(prompts[i]);
    e.view = view;
    if (cache_) {
      if (auto hit = cache_->load({provider_id, model_id, e.prompt_hash})) {
        check_dim(hit->size());
        e.dim = hit->size();
        e.vector = std::move(*hit);
        ++stats_.cache_hits;
        continue;
      }
    }
    if (first_seen.emplace(prompts[i], i).second) pending.push_back(i);
  }

  const std::size_t batch_size = options_.batch_size;
  const std::size_t batches = (pending.size() + batch_size - 1) / batch_size;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t b = next++; b < batches; b = next++) {
      try {
        const std::size_t lo = b * batch_size;
        const std::size_t hi = std::min(pending.size(), lo + batch_size);
        std::vector<std::string> batch;
        for (std::size_t k = lo; k < hi; ++k) batch.push_back(prompts[pending[k]]);
        auto vectors = call_with_retry(batch);
        if (vectors.size() != batch.size()) {
          throw EmbedError(EmbedErrorKind::WrongCount, "sent " + std::to_string(batch.size()) +
                                                           " prompts, received " +
                                                           std::to_string(vectors.size()) + " vectors");
        }
        for (std::size_t k = lo; k < hi; ++k) {
          ViewEmbedding& e = out[pending[k]];
          std::vector<double>& v = vectors[k - lo];
          {
            std::lock_guard lock(stats_mutex());
            check_dim(v.size());
          }
          if (cache_) {
            cache_->store({provider_id, model_id, e.prompt_hash}, v);
            std::lock_guard lock(stats_mutex());
            ++stats_.new_entries;
          }
          e.dim = v.size();
          e.vector = std::move(v);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = batches;  // stop handing out work
      }
    }
  };

  const std::size_t threads = std::min(options_.max_in_flight, batches);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (cache_) cache_->flush();
  if (failure) std::rethrow_exception(failure);

  // Duplicates inside this call share the first occurrence's vector.
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    if (out[i].dim == 0) {
      const ViewEmbedding& src = out[first_seen.at(prompts[i])];
      out[i].vector = src.vector;
      out[i].dim = src.dim;
    }
  }
  return out;
}

std::vector<ViewEmbedding> embed(EmbeddingProvider& provider, std::span<const std::string> prompts, View view,
                                 EmbeddingCache* cache, EmbedOptions options) {
  Embedder embedder(provider, cache, std::move(options));
  return embedder.embed(prompts, view);
}

}  // namespace mvmol::views
