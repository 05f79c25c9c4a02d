#include <majsynth/errors.hpp>
#include <majsynth/fitness.hpp>

#include <algorithm>
#include <limits>

namespace majsynth
{

double mismatch_fitness( uint64_t matches, uint64_t rows )
{
  if ( matches == 0u )
  {
    return 2.0 * static_cast<double>( rows );
  }
  return static_cast<double>( rows ) / static_cast<double>( matches );
}

double valid_fitness( uint32_t gates, uint32_t levels )
{
  if ( gates == 0u || levels == 0u )
  {
    return degenerate_valid_fitness;
  }
  return 1.0 - ( 1.0 / gates + 1.0 / levels );
}

double fitness1( const chromosome& c, const truth_table& target )
{
  return fitness1( c, target, base_tables( target.num_vars() ) );
}

double fitness1( const chromosome& c, const truth_table& target, const base_tables& base )
{
  auto const matches = match_count( evaluate( c, base ), target );
  if ( matches < target.num_rows() )
  {
    return mismatch_fitness( matches, target.num_rows() );
  }
  auto const m = compute_metrics( c );
  return valid_fitness( m.gates(), m.levels );
}

combined_metrics compute_combined_metrics( std::span<const chromosome> outputs, const base_tables& base )
{
  combined_metrics cm;
  uint32_t sum_maj = 0, sum_inv = 0;
  for ( auto const& c : outputs )
  {
    auto const m = compute_metrics( c );
    cm.outputs.push_back( m );
    sum_maj += m.n_maj;
    sum_inv += m.n_inv;
    cm.max_level = std::max( cm.max_level, m.levels );
  }
  auto const distinct = count_by_kind( gate_signatures( outputs, base ) );
  cm.total_maj = distinct.maj;
  cm.total_inv = distinct.inv;
  cm.tg = distinct.total();
  cm.weighted_gates = cm.total_maj + cm.total_inv / 3.0;
  cm.common_maj = sum_maj - distinct.maj;
  cm.common_inv = sum_inv - distinct.inv;
  return cm;
}

stored_row make_stored_row( std::vector<chromosome> chromosomes, const base_tables& base, double fitness )
{
  stored_row row;
  row.signatures = gate_signatures( chromosomes, base );
  auto const n = count_by_kind( row.signatures );
  row.unique_maj = n.maj;
  row.unique_inv = n.inv;
  for ( auto const& c : chromosomes )
    row.max_level = std::max( row.max_level, compute_metrics( c ).levels );
  row.chromosomes = std::move( chromosomes );
  row.fitness = fitness;
  return row;
}

combined_metrics compute_combined_metrics( const stored_row& row, const chromosome& c, const base_tables& base )
{
  auto all = row.chromosomes;
  all.push_back( c );
  return compute_combined_metrics( all, base );
}

fitness_context::fitness_context( uint32_t num_vars, std::vector<stored_row> rows )
    : base_( num_vars ), rows_( std::move( rows ) )
{
}

void fitness_context::replace_rows( std::vector<stored_row> rows )
{
  std::lock_guard lock( mutex_ );
  rows_ = std::move( rows );
  memo_.clear();
}

std::shared_ptr<const fitness2_result> fitness_context::find( const chromosome& c ) const
{
  std::lock_guard lock( mutex_ );
  auto it = memo_.find( c );
  return it == memo_.end() ? nullptr : it->second;
}

std::shared_ptr<const fitness2_result> fitness_context::insert( const chromosome& c, std::shared_ptr<const fitness2_result> result )
{
  std::lock_guard lock( mutex_ );
  return memo_.try_emplace( c, std::move( result ) ).first->second;
}

std::size_t fitness_context::memo_size() const
{
  std::lock_guard lock( mutex_ );
  return memo_.size();
}

std::shared_ptr<const fitness2_result> fitness2( const chromosome& c, const truth_table& target, fitness_context& ctx )
{
  if ( ctx.rows_.empty() )
  {
    throw usage_error( "fitness2 requires at least one stored row" );
  }
  auto const& base = ctx.base_;
  auto const matches = match_count( evaluate( c, base ), target );
  if ( matches < target.num_rows() )
  {
    auto r = std::make_shared<fitness2_result>();
    r->value = mismatch_fitness( matches, target.num_rows() );
    return r;
  }
  if ( auto hit = ctx.find( c ) )
  {
    ++ctx.hits_;
    return hit;
  }
  ++ctx.misses_;

  auto const sig = gate_signatures( c, base );
  auto const m = compute_metrics( c );

  auto final_gates = std::numeric_limits<double>::infinity();
  auto final_level = std::numeric_limits<uint32_t>::max();
  std::size_t final_pos = 0;
  for ( std::size_t i = 0; i < ctx.rows_.size(); ++i )
  {
    auto const& row = ctx.rows_[i];
    auto const common = count_common( row.signatures, sig );
    auto const total_majority = row.unique_maj - common.maj;
    auto const total_inverter = row.unique_inv - common.inv;
    auto const total_gates = total_majority + total_inverter / 3.0;
    auto const max_level = std::max( m.levels, row.max_level );
    if ( ( total_gates < final_gates && max_level <= final_level ) || max_level < final_level )
    {
      final_gates = total_gates;
      final_level = max_level;
      final_pos = i;
    }
  }

  auto const& row = ctx.rows_[final_pos];
  auto merged = harmonize( c, row.chromosomes, base );
  auto const row_sig = gate_signatures( merged.stored, base );
  auto const cur_sig = gate_signatures( merged.current, base );
  auto const cur_m = compute_metrics( merged.current );
  uint32_t level = cur_m.levels;
  for ( auto const& s : merged.stored )
    level = std::max( level, compute_metrics( s ).levels );
  auto const no_of_gates = static_cast<uint32_t>( row_sig.size() ) + cur_m.gates() - count_common( row_sig, cur_sig ).total();

  auto r = std::make_shared<fitness2_result>();
  r->value = valid_fitness( no_of_gates, level );
  r->row = final_pos;
  r->combined = std::move( merged.stored );
  r->combined.push_back( std::move( merged.current ) );
  r->metrics = compute_combined_metrics( r->combined, base );
  return ctx.insert( c, std::move( r ) );
}

} // namespace majsynth
