from prometheus_client import Counter, Histogram

class DynamicsMetrics:
    orbit_analysis_duration = Histogram(
        'orbit_analysis_duration_seconds',
        'Time spent partitioning a state space into orbits',
        ['action']
    )
    states_visited = Counter(
        'states_visited_total',
        'Number of states walked while tracing orbits',
        ['action']
    )
    orbits_found = Counter(
        'orbits_found_total',
        'Number of orbits discovered',
        ['action']
    )
    resonance_checks = Counter(
        'resonance_checks_total',
        'Number of resonance verifications',
        ['outcome']
    )
    suite_cases = Counter(
        'suite_cases_total',
        'Number of theorem instances checked',
        ['suite', 'outcome']
    )

metrics = DynamicsMetrics()
