import logging
from fractions import Fraction

import numpy as np

from ..bell import BellScenario, BellUtils
from ..criteria import CriteriaUtils
from ..monogamy import MonogamyUtils, WernerCategory
from ..pauli import MeasurementFrame, PauliString
from ..states import Partition, ReducedStateCache, StateUtils, WernerState
from ..trees import TreeUtils
from ..utils import CRITERION_TOL, DENSE_QUBIT_LIMIT, ConfigError, ConstructionError, \
    InternalConsistencyError, TreeSizeError
from .config import REQUIRED

TSIRELSON = 2 * np.sqrt(2)
CHSH_TOL = 1e-6
DEVIATION_TOL = 1e-10


def _qubit_range(parameters, field="parameters.qubit_range"):
    span = parameters['qubit_range']
    if len(span) != 2 or not all(isinstance(n, int) and not isinstance(n, bool) for n in span):
        raise ConfigError(field, "expected [smallest, largest]")
    if span[0] < 2 or span[1] < span[0] or span[1] > DENSE_QUBIT_LIMIT:
        raise ConfigError(field, "range must lie within 2..{}".format(DENSE_QUBIT_LIMIT))
    return list(range(span[0], span[1] + 1))


def _state_kind(state):
    return 'pure' if type(state).__name__ == 'PureState' else 'mixed'


def _random_frames(rng, count):
    return tuple(MeasurementFrame.random(rng) for _ in range(count))


class Experiment:
    """An experiment kind: a parameter table, a trial plan, one trial, a summary

    plan() lists JSON-ready trial descriptions, run_trial() turns one into a
    record and summarize() derives statistics and pass/fail checks from the
    records alone.
    """

    PARAMETERS = {'seed': (int, REQUIRED)}

    @staticmethod
    def validate(parameters):
        pass

    @staticmethod
    def plan(parameters):
        raise NotImplementedError

    @staticmethod
    def run_trial(task, rng, parameters):
        raise NotImplementedError

    @staticmethod
    def summarize(records, parameters):
        raise NotImplementedError


class ZbSweep(Experiment):
    """Sum-of-squares criterion on effective states of random states

    Without region_sizes every two-region split with both regions of at least
    min_region qubits is tried; with region_sizes the one consecutive split of
    those sizes is used and the anti-commuting grouping bound is checked too.
    """

    PARAMETERS = {
        'seed': (int, REQUIRED),
        'states': (int, 1000),
        'qubit_range': (list, [4, 10]),
        'frames': (int, 50),
        'min_region': (int, 2),
        'pure_fraction': (float, 0.5),
        'region_sizes': (list, None),
        'tolerance': (float, CRITERION_TOL),
    }

    @staticmethod
    def validate(parameters):
        if parameters['states'] < 1:
            raise ConfigError("parameters.states", "must be positive")
        if parameters['frames'] < 1:
            raise ConfigError("parameters.frames", "must be positive")
        sizes = parameters['region_sizes']
        if sizes is None:
            if _qubit_range(parameters)[0] < 2 * parameters['min_region']:
                raise ConfigError("parameters.qubit_range",
                                  "smallest register cannot hold two regions of min_region qubits")
        elif len(sizes) < 2 or not all(isinstance(n, int) and n >= 1 for n in sizes) \
                or sum(sizes) > DENSE_QUBIT_LIMIT:
            raise ConfigError("parameters.region_sizes",
                              "expected at least two positive sizes totalling at most {}".format(
                                  DENSE_QUBIT_LIMIT))

    @staticmethod
    def plan(parameters):
        if parameters['region_sizes'] is not None:
            qubits = [sum(parameters['region_sizes'])]
        else:
            qubits = _qubit_range(parameters)
        return [{'qubits': qubits[i % len(qubits)]} for i in range(parameters['states'])]

    @staticmethod
    def run_trial(task, rng, parameters):
        n = task['qubits']
        state = StateUtils.random_state(n, rng, parameters['pure_fraction'])
        cache = ReducedStateCache(state)
        sizes = parameters['region_sizes']
        if sizes is not None:
            partitions = [Partition.from_sizes(sizes)]
        else:
            partitions = list(Partition.bipartitions(n, parameters['min_region']))
        region_count = partitions[0].region_count
        frames_batch = [_random_frames(rng, region_count) for _ in range(parameters['frames'])]

        largest = 0.0
        violations = 0
        for partition in partitions:
            effective = StateUtils.effective_state(state, partition, cache=cache)
            values = CriteriaUtils.zb_values(CriteriaUtils.pauli_correlations(effective),
                                             frames_batch)
            largest = max(largest, float(np.max(values)))
            violations += int(np.sum(values > 1 + parameters['tolerance']))

        record = {
            'qubits': n,
            'state': _state_kind(state),
            'partitions': len(partitions),
            'max_L': largest,
            'violations': violations,
        }
        if sizes is not None:
            family = TreeUtils.folded_tree(region_count)
            if all(s >= f for s, f in zip(sizes, family.region_sizes)):
                bound = MonogamyUtils.family_bound(state, partitions[0], frames_batch[0],
                                                   family, cache=cache)
                record['family_L'] = bound.value
                record['family_max_norm'] = bound.max_squared_norm
                record['family_deviation'] = abs(bound.value - bound.zb_value)
        return record

    @staticmethod
    def summarize(records, parameters):
        tolerance = parameters['tolerance']
        summary = {
            'trials': len(records),
            'max_L': max(r['max_L'] for r in records),
            'violations': sum(r['violations'] for r in records),
            'partitions': sum(r['partitions'] for r in records),
        }
        checks = {
            'no_violation': summary['violations'] == 0,
            'all_trials_ran': len(records) == parameters['states'],
        }
        grouped = [r for r in records if 'family_L' in r]
        if grouped:
            summary['max_family_norm'] = max(r['family_max_norm'] for r in grouped)
            checks['grouping_matches_tensor'] = all(
                r['family_deviation'] <= tolerance for r in grouped)
            checks['grouped_vectors_bounded'] = summary['max_family_norm'] <= 1 + tolerance
        return summary, checks


class PqCheck(Experiment):
    """P/Q vector route against the direct correlation-tensor route"""

    PARAMETERS = {
        'seed': (int, REQUIRED),
        'instances': (int, 300),
        'qubit_range': (list, [4, 8]),
        'pure_fraction': (float, 0.5),
        'tolerance': (float, CRITERION_TOL),
    }

    @staticmethod
    def validate(parameters):
        _qubit_range(parameters)
        if parameters['qubit_range'][0] < 3:
            raise ConfigError("parameters.qubit_range", "P/Q pairing needs at least 3 qubits")

    @staticmethod
    def plan(parameters):
        qubits = _qubit_range(parameters)
        return [{'qubits': qubits[i % len(qubits)]} for i in range(parameters['instances'])]

    @staticmethod
    def run_trial(task, rng, parameters):
        n = task['qubits']
        state = StateUtils.random_state(n, rng, parameters['pure_fraction'])
        partitions = list(Partition.bipartitions(n, 1))
        partition = partitions[int(rng.integers(len(partitions)))]
        frames = _random_frames(rng, 2)
        cache = ReducedStateCache(state)

        effective = StateUtils.effective_state(state, partition, cache=cache)
        zb = CriteriaUtils.zb_value(CriteriaUtils.correlation_tensor(effective, frames))
        try:
            pq = MonogamyUtils.pq_bound(state, partition, frames, cache=cache)
            consistent = True
        except InternalConsistencyError as e:
            logging.error(str(e))
            p, q = MonogamyUtils.pq_vectors(state, partition, frames, cache)
            pq = float((np.sum(np.sum(p, axis=(0, 1)) ** 2) + np.sum(np.sum(q, axis=(0, 1)) ** 2))
                       / (2 * (p.shape[0] * p.shape[1]) ** 2))
            consistent = False
        return {
            'qubits': n,
            'state': _state_kind(state),
            'region_sizes': list(partition.region_sizes),
            'pq': pq,
            'zb': zb,
            'deviation': abs(pq - zb),
            'consistent': consistent,
        }

    @staticmethod
    def summarize(records, parameters):
        tolerance = parameters['tolerance']
        summary = {
            'trials': len(records),
            'max_pq': max(r['pq'] for r in records),
            'max_deviation': max(r['deviation'] for r in records),
            'single_qubit_side': sum(1 for r in records if min(r['region_sizes']) == 1),
        }
        checks = {
            'routes_agree': summary['max_deviation'] <= tolerance,
            'pq_bounded': summary['max_pq'] <= 1 + tolerance,
            'all_trials_ran': len(records) == parameters['instances'],
        }
        return summary, checks


class TreeBuild(Experiment):
    """Simple and folded anti-commuting trees and the two generating operations"""

    PARAMETERS = {
        'seed': (int, REQUIRED),
        'k_values': (list, [2, 3, 4, 5, 6, 7, 8]),
        'generation_trials': (int, 100),
        'generation_max_k': (int, 5),
        'min_region_k': (list, [2, 3, 4, 5, 6, 7, 8, 9, 10]),
    }

    @staticmethod
    def validate(parameters):
        for position, k in enumerate(parameters['k_values']):
            if not isinstance(k, int) or not 2 <= k <= 8:
                raise ConfigError("parameters.k_values[{}]".format(position),
                                  "k must be an integer between 2 and 8")

    @staticmethod
    def plan(parameters):
        return [{'k': k} for k in parameters['k_values']]

    @staticmethod
    def run_trial(task, rng, parameters):
        k = task['k']
        record = {'k': k}
        for name, build in (('simple', TreeUtils.simple_tree), ('folded', TreeUtils.folded_tree)):
            try:
                family = build(k)
                verified = TreeUtils.verify_anticommuting(family)
            except ConstructionError as e:
                logging.error(str(e))
                record[name] = {'verified': False}
                continue
            record[name] = {
                'sequences': len(family),
                'verified': verified,
                'region_sizes': list(family.region_sizes),
            }
            if k <= 3:
                record[name]['extension_candidates'] = len(TreeUtils.extension_candidates(family))
        record['fold_bound'] = TreeUtils.fold_bound(k)
        if 'region_sizes' in record['folded']:
            record['within_bound'] = max(record['folded']['region_sizes']) <= record['fold_bound']

        if k <= parameters['generation_max_k']:
            base = TreeUtils.folded_tree(k)
            passed = 0
            for _ in range(parameters['generation_trials']):
                shifts = [int(rng.integers(n)) for n in base.region_sizes]
                flips = [bool(rng.integers(2)) for _ in range(k)]
                family = TreeUtils.generate_vector_family(base, shifts, flips)
                passed += int(TreeUtils.verify_anticommuting(family))
            record['generated'] = parameters['generation_trials']
            record['generated_verified'] = passed
        return record

    @staticmethod
    def summarize(records, parameters):
        min_region = {str(k): TreeUtils.min_region_size(k) for k in parameters['min_region_k']}
        summary = {
            'trials': len(records),
            'min_region_size': min_region,
            'largest_folded_region': {str(r['k']): max(r['folded'].get('region_sizes', [0]))
                                      for r in records},
        }
        checks = {
            'all_verified': all(r['simple']['verified'] and r['folded']['verified']
                                for r in records),
            'sequence_counts': all(r['simple'].get('sequences') == 2 ** r['k']
                                   and r['folded'].get('sequences') == 2 ** r['k']
                                   for r in records),
            'folded_within_bound': all(r.get('within_bound', False) for r in records),
            'generation_preserves': all(r['generated_verified'] == r['generated']
                                        for r in records if 'generated' in r),
            'families_complete': all(r[name].get('extension_candidates', 0) == 0
                                     for r in records for name in ('simple', 'folded')),
            'min_region_known': min_region.get('4', 2) == 2 and min_region.get('10', 29) == 29,
        }
        return summary, checks


class StrategyPipeline(Experiment):
    """Symmetrize, read off strategy weights, reconstruct, compare with the effective state"""

    CASE_PARAMETERS = {
        'region_sizes': (list, REQUIRED),
        'settings': (int, REQUIRED),
        'trials': (int, REQUIRED),
        'block_size': (int, 1),
    }

    PARAMETERS = {
        'seed': (int, REQUIRED),
        'cases': ([CASE_PARAMETERS], [
            {'region_sizes': [2, 2], 'settings': 2, 'trials': 50},
            {'region_sizes': [3, 3], 'settings': 3, 'trials': 10},
        ]),
        'pure_fraction': (float, 0.5),
        'tolerance': (float, DEVIATION_TOL),
    }

    @staticmethod
    def validate(parameters):
        for position, case in enumerate(parameters['cases']):
            field = "parameters.cases[{}]".format(position)
            sizes = case['region_sizes']
            if not sizes or not all(isinstance(n, int) and n >= 1 for n in sizes) \
                    or sum(sizes) > DENSE_QUBIT_LIMIT:
                raise ConfigError(field + ".region_sizes", "invalid region sizes")
            if case['block_size'] < 1 or case['settings'] < 1:
                raise ConfigError(field, "settings and block_size must be positive")
            if case['settings'] * case['block_size'] > min(sizes):
                raise ConfigError(field + ".settings",
                                  "settings exceed the budget of the smallest region")

    @staticmethod
    def plan(parameters):
        return [{'case': c, 'trial': t}
                for c, case in enumerate(parameters['cases']) for t in range(case['trials'])]

    @staticmethod
    def pipeline(case, rng, pure_fraction):
        sizes = case['region_sizes']
        block_size = case['block_size']
        state = StateUtils.random_state(sum(sizes), rng, pure_fraction)
        partition = Partition.from_sizes(sizes)
        settings = [case['settings']] * len(sizes)
        if block_size == 1:
            scenario = BellScenario.random_projective(settings, rng)
        else:
            scenario = BellScenario.random_basis(settings, rng, block_size)

        symmetrized = StateUtils.permutation_symmetrize(state, partition, rng)
        model = BellUtils.strategy_distribution(symmetrized, partition, scenario)
        reconstructed = BellUtils.reconstruct_distribution(model, scenario)
        effective = StateUtils.effective_state(state, partition, block_size=block_size)
        quantum = BellUtils.quantum_distribution(effective, scenario)
        return state, scenario, model, reconstructed, quantum

    @staticmethod
    def run_trial(task, rng, parameters):
        case = parameters['cases'][task['case']]
        state, scenario, model, reconstructed, quantum = StrategyPipeline.pipeline(
            case, rng, parameters['pure_fraction'])
        return {
            'case': task['case'],
            'trial': task['trial'],
            'state': _state_kind(state),
            'strategies': scenario.strategy_count,
            'max_deviation': reconstructed.max_deviation(quantum),
            'min_weight': float(np.min(model.weights)),
            'signalling': quantum.signalling(),
        }

    @staticmethod
    def summarize(records, parameters):
        tolerance = parameters['tolerance']
        summary = {
            'trials': len(records),
            'max_deviation': max(r['max_deviation'] for r in records),
            'min_weight': min(r['min_weight'] for r in records),
        }
        checks = {
            'reconstruction_matches': summary['max_deviation'] <= tolerance,
            'weights_nonnegative': summary['min_weight'] >= -tolerance,
            'all_trials_ran': len(records) == sum(c['trials'] for c in parameters['cases']),
        }
        return summary, checks


class Membership(StrategyPipeline):
    """LP membership of pipeline distributions, with the singlet CHSH distribution as control"""

    PARAMETERS = dict(StrategyPipeline.PARAMETERS, tolerance=(float, CRITERION_TOL))

    @staticmethod
    def plan(parameters):
        return [{'case': 'singlet_chsh'}] + StrategyPipeline.plan(parameters)

    @staticmethod
    def run_trial(task, rng, parameters):
        if task['case'] == 'singlet_chsh':
            scenario = BellUtils.chsh_singlet_scenario()
            singlet = StateUtils.named_state('singlet', 2).density_matrix()
            distribution = BellUtils.quantum_distribution(singlet, scenario)
            verdict = BellUtils.lhv_membership(distribution, scenario)
            return {
                'case': 'singlet_chsh',
                'chsh': BellUtils.chsh_value(distribution),
                'feasible': verdict.feasible,
                'residual': verdict.residual,
            }

        case = parameters['cases'][task['case']]
        _, scenario, model, _, quantum = StrategyPipeline.pipeline(
            case, rng, parameters['pure_fraction'])
        verdict = BellUtils.lhv_membership(quantum, scenario)
        hinted = BellUtils.lhv_membership(quantum, scenario, hint=model)
        return {
            'case': task['case'],
            'trial': task['trial'],
            'strategies': verdict.strategy_count,
            'feasible': verdict.feasible,
            'residual': verdict.residual,
            'certificate_accepted': hinted.feasible and hinted.model is model,
        }

    @staticmethod
    def summarize(records, parameters):
        controls = [r for r in records if r['case'] == 'singlet_chsh']
        pipeline = [r for r in records if r['case'] != 'singlet_chsh']
        summary = {
            'trials': len(pipeline),
            'accepted': sum(1 for r in pipeline if r['feasible']),
            'max_residual': max([r['residual'] for r in pipeline] or [0.0]),
            'control_chsh': controls[0]['chsh'] if controls else None,
        }
        checks = {
            'accepts_local_distributions': all(r['feasible'] for r in pipeline),
            'certificates_accepted': all(r['certificate_accepted'] for r in pipeline),
            'rejects_singlet_chsh': bool(controls) and not any(r['feasible'] for r in controls),
        }
        return summary, checks


class WernerThresholds(Experiment):
    """Singlet-monogamy caps, threshold classification and the cap's tightness"""

    PARAMETERS = {
        'seed': (int, REQUIRED),
        'region_pairs': (list, [[1, 1], [1, 2], [2, 2], [3, 5], [8, 8]]),
        'visibilities': (list, [-1.0 / 3.0, 0.0, 0.4, 5.0 / 12.0, 0.5, 2.0 / 3.0, 0.7, 0.9, 1.0]),
        'optimize_pairs': (list, [[1, 2]]),
        'thermal_trials': (int, 20),
        'thermal_qubit_range': (list, [3, 6]),
        'optimize_tolerance': (float, 0.01),
    }

    @staticmethod
    def validate(parameters):
        for name in ('region_pairs', 'optimize_pairs'):
            for position, pair in enumerate(parameters[name]):
                if not isinstance(pair, list) or len(pair) != 2 \
                        or not all(isinstance(n, int) and n >= 1 for n in pair):
                    raise ConfigError("parameters.{}[{}]".format(name, position),
                                      "expected two positive region sizes")
        for position, pair in enumerate(parameters['optimize_pairs']):
            if sum(pair) > DENSE_QUBIT_LIMIT:
                raise ConfigError("parameters.optimize_pairs[{}]".format(position),
                                  "too many qubits")
        for position, v in enumerate(parameters['visibilities']):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError("parameters.visibilities[{}]".format(position),
                                  "expected a number")
        _qubit_range({'qubit_range': parameters['thermal_qubit_range']},
                     "parameters.thermal_qubit_range")

    @staticmethod
    def plan(parameters):
        tasks = [{'type': 'cap', 'sizes': pair} for pair in parameters['region_pairs']]
        tasks += [{'type': 'optimize', 'sizes': pair} for pair in parameters['optimize_pairs']]
        qubits = _qubit_range({'qubit_range': parameters['thermal_qubit_range']})
        tasks += [{'type': 'thermal', 'qubits': qubits[i % len(qubits)]}
                  for i in range(parameters['thermal_trials'])]
        return tasks

    @staticmethod
    def run_trial(task, rng, parameters):
        if task['type'] == 'cap':
            size_a, size_b = task['sizes']
            cap = MonogamyUtils.singlet_monogamy_cap(size_a, size_b)
            classes = []
            for v in parameters['visibilities']:
                result = MonogamyUtils.werner_classify(v, size_a, size_b)
                classes.append({'visibility': float(v), 'category': result.category.value,
                                'exceeds_cap': result.exceeds_cap})
            return {'type': 'cap', 'sizes': [size_a, size_b], 'cap': str(cap.cap),
                    'cap_value': cap.value, 'classes': classes}

        if task['type'] == 'optimize':
            size_a, size_b = task['sizes']
            visibility, state, partition = MonogamyUtils.maximize_effective_visibility(
                size_a, size_b)
            return {
                'type': 'optimize',
                'sizes': [size_a, size_b],
                'visibility': float(visibility),
                'twirled_visibility': MonogamyUtils.max_effective_visibility(state, partition),
                'cap_value': MonogamyUtils.singlet_monogamy_cap(size_a, size_b).value,
            }

        n = task['qubits']
        couplings = [(i, j, float(rng.uniform(-1, 1)))
                     for i in range(n) for j in range(i + 1, n)]
        beta = float(rng.uniform(0.1, 5.0))
        state = StateUtils.heisenberg_thermal(n, beta, couplings)
        partitions = list(Partition.bipartitions(n, 1))
        partition = partitions[int(rng.integers(len(partitions)))]
        rotated = StateUtils.collective_rotation(state, StateUtils.random_unitary(rng))
        return {
            'type': 'thermal',
            'qubits': n,
            'sizes': list(partition.region_sizes),
            'visibility': MonogamyUtils.max_effective_visibility(state, partition),
            'cap_value': MonogamyUtils.singlet_monogamy_cap(*partition.region_sizes).value,
            'rotation_deviation': float(np.max(np.abs(rotated.matrix - state.matrix))),
        }

    @staticmethod
    def summarize(records, parameters):
        caps = [r for r in records if r['type'] == 'cap']
        optimized = [r for r in records if r['type'] == 'optimize']
        thermal = [r for r in records if r['type'] == 'thermal']
        order = [c.value for c in WernerCategory]

        def monotone(classes):
            ranks = [order.index(c['category'])
                     for c in sorted(classes, key=lambda c: c['visibility'])]
            return ranks == sorted(ranks)

        summary = {
            'caps': {"{}|{}".format(*r['sizes']): r['cap'] for r in caps},
            'optimized': {"{}|{}".format(*r['sizes']): r['visibility'] for r in optimized},
            'max_thermal_margin': max([r['visibility'] - r['cap_value'] for r in thermal]
                                      or [float('-inf')]),
        }
        checks = {
            'cap_formula': all(Fraction(r['cap']) == Fraction(max(r['sizes']) + 2,
                                                                3 * max(r['sizes']))
                               for r in caps),
            'cap_two_thirds': all(r['cap'] == '2/3' for r in caps if max(r['sizes']) == 2),
            'cap_five_twelfths': all(r['cap'] == '5/12' for r in caps if max(r['sizes']) == 8),
            'classification_monotone': all(monotone(r['classes']) for r in caps),
            'optimum_reaches_cap': all(
                abs(r['visibility'] - r['cap_value']) <= parameters['optimize_tolerance']
                and abs(r['twirled_visibility'] - r['visibility']) <= CRITERION_TOL
                for r in optimized),
            'thermal_within_cap': all(r['visibility'] <= r['cap_value'] + CRITERION_TOL
                                      for r in thermal),
            'thermal_rotation_invariant': all(r['rotation_deviation'] <= CRITERION_TOL
                                              for r in thermal),
        }
        return summary, checks


class Chsh(Experiment):
    """Controls where a violation is possible, and effective states where it is not"""

    PARAMETERS = {
        'seed': (int, REQUIRED),
        'werner_visibilities': (list, [0.0, 0.25, 0.5, 1.0 / np.sqrt(2), 0.9, 1.0]),
        'effective_trials': (int, 50),
        'qubit_range': (list, [4, 8]),
        'pure_fraction': (float, 0.5),
    }

    @staticmethod
    def validate(parameters):
        _qubit_range(parameters)
        for position, v in enumerate(parameters['werner_visibilities']):
            if isinstance(v, bool) or not isinstance(v, (int, float)) \
                    or not -1.0 / 3.0 <= v <= 1.0:
                raise ConfigError("parameters.werner_visibilities[{}]".format(position),
                                  "expected a visibility in [-1/3, 1]")

    @staticmethod
    def plan(parameters):
        tasks = [{'type': 'singlet_tensor'}, {'type': 'singlet_optimize'},
                 {'type': 'max_mixed'}]
        tasks += [{'type': 'werner', 'visibility': float(v)}
                  for v in parameters['werner_visibilities']]
        qubits = _qubit_range(parameters)
        tasks += [{'type': 'effective', 'qubits': qubits[i % len(qubits)]}
                  for i in range(parameters['effective_trials'])]
        return tasks

    @staticmethod
    def run_trial(task, rng, parameters):
        kind = task['type']
        singlet = StateUtils.named_state('singlet', 2).density_matrix()
        if kind == 'singlet_tensor':
            tensor = CriteriaUtils.correlation_tensor(
                singlet, [MeasurementFrame.standard(), MeasurementFrame.standard()])
            value = CriteriaUtils.zb_value(tensor)
            return {'type': kind, 'value': value, 'expected': 2.0,
                    'deviation': abs(value - 2.0), 'tolerance': CRITERION_TOL}
        if kind == 'singlet_optimize':
            state, expected = singlet, TSIRELSON
        elif kind == 'max_mixed':
            state, expected = StateUtils.named_state('max_mixed', 2), 0.0
        elif kind == 'werner':
            v = task['visibility']
            state, expected = WernerState(v).matrix(), TSIRELSON * abs(v)
        else:
            n = task['qubits']
            source = StateUtils.random_state(n, rng, parameters['pure_fraction'])
            partitions = list(Partition.bipartitions(n, 2))
            partition = partitions[int(rng.integers(len(partitions)))]
            state = StateUtils.effective_state(source, partition)
            result = BellUtils.chsh_optimize(state, seed=parameters['seed'])
            return {'type': kind, 'qubits': n, 'value': result.value,
                    'analytic_bound': result.analytic_bound,
                    'below_classical': result.value <= 2 + CRITERION_TOL}

        result = BellUtils.chsh_optimize(state, seed=parameters['seed'])
        return {'type': kind, 'value': result.value, 'expected': float(expected),
                'analytic_bound': result.analytic_bound,
                'deviation': abs(result.value - expected), 'tolerance': CHSH_TOL}

    @staticmethod
    def summarize(records, parameters):
        controls = [r for r in records if 'expected' in r]
        effective = [r for r in records if r['type'] == 'effective']
        summary = {
            'singlet_chsh': next((r['value'] for r in records
                                  if r['type'] == 'singlet_optimize'), None),
            'max_effective_chsh': max([r['value'] for r in effective] or [0.0]),
        }
        checks = {
            'controls_match': all(r['deviation'] <= r['tolerance'] for r in controls),
            'effective_within_classical': all(r['below_classical'] for r in effective),
            'never_above_tsirelson': all(r['value'] <= TSIRELSON + CHSH_TOL for r in records),
        }
        return summary, checks


class Budget(Experiment):
    """floor(N_X / M) settings-budget calculator"""

    CASE_PARAMETERS = {
        'region_size': (int, None),
        'total_spins': (int, None),
        'partitions': (int, None),
        'block_size': (int, REQUIRED),
        'expected': (int, None),
    }

    PARAMETERS = {
        'seed': (int, REQUIRED),
        'cases': ([CASE_PARAMETERS], [
            {'region_size': 100, 'block_size': 1, 'expected': 100},
            {'region_size': 100, 'block_size': 10, 'expected': 10},
            {'total_spins': 10 ** 23, 'partitions': 10 ** 7, 'block_size': 10 ** 7,
             'expected': 10 ** 9},
        ]),
    }

    @staticmethod
    def validate(parameters):
        for position, case in enumerate(parameters['cases']):
            field = "parameters.cases[{}]".format(position)
            if case['region_size'] is None and (case['total_spins'] is None
                                                or case['partitions'] is None):
                raise ConfigError(field + ".region_size",
                                  "give region_size or total_spins with partitions")

    @staticmethod
    def plan(parameters):
        return [{'case': c} for c in range(len(parameters['cases']))]

    @staticmethod
    def run_trial(task, rng, parameters):
        case = parameters['cases'][task['case']]
        region_size = case['region_size']
        if region_size is None:
            region_size = case['total_spins'] // case['partitions']
        budget = BellUtils.settings_budget(region_size, case['block_size'])
        return {'case': task['case'], 'region_size': region_size,
                'block_size': case['block_size'], 'budget': budget,
                'expected': case['expected'],
                'matches': case['expected'] is None or budget == case['expected']}

    @staticmethod
    def summarize(records, parameters):
        summary = {'budgets': [r['budget'] for r in records]}
        checks = {'budgets_match': all(r['matches'] for r in records)}
        return summary, checks


class NormBound(Experiment):
    """Squared expectation norms of anti-commuting families on random states"""

    PARAMETERS = {
        'seed': (int, REQUIRED),
        'families': (list, ['pauli_triple', 'simple:1', 'simple:2', 'simple:3',
                            'folded:2', 'folded:3', 'folded:4']),
        'states': (int, 1000),
        'pure_fraction': (float, 0.5),
        'tolerance': (float, CRITERION_TOL),
    }

    @staticmethod
    def family(name):
        if name == 'pauli_triple':
            return [PauliString.from_label(label) for label in 'XYZ']
        try:
            construction, k = name.split(':')
            k = int(k)
        except ValueError:
            raise ConfigError("parameters.families", "bad family name '{}'".format(name))
        try:
            if construction == 'simple':
                return TreeUtils.simple_tree(k)
            if construction == 'folded':
                return TreeUtils.folded_tree(k)
        except (TreeSizeError, ConstructionError) as e:
            raise ConfigError("parameters.families", "{}: {}".format(name, e))
        raise ConfigError("parameters.families", "unknown construction '{}'".format(construction))

    @staticmethod
    def validate(parameters):
        for position, name in enumerate(parameters['families']):
            if not isinstance(name, str):
                raise ConfigError("parameters.families[{}]".format(position), "expected a string")
            family = NormBound.family(name)
            span = family[0].qubit_count if isinstance(family, list) else family.total_qubits
            if span > 20:
                raise ConfigError("parameters.families[{}]".format(position),
                                  "family spans {} qubits".format(span))

    @staticmethod
    def plan(parameters):
        return [{'family': name} for name in parameters['families']]

    @staticmethod
    def run_trial(task, rng, parameters):
        family = NormBound.family(task['family'])
        span = family[0].qubit_count if isinstance(family, list) else family.total_qubits
        largest = 0.0
        for _ in range(parameters['states']):
            if span <= DENSE_QUBIT_LIMIT - 2:
                state = StateUtils.random_state(span, rng, parameters['pure_fraction'])
            else:
                state = StateUtils.named_state('random_pure', span, rng)
            vector = MonogamyUtils.expectation_vector(state, family)
            largest = max(largest, vector.squared_norm())
        return {'family': task['family'], 'qubits': span, 'members': len(family),
                'states': parameters['states'], 'max_squared_norm': largest,
                'verified': TreeUtils.verify_anticommuting(family)}

    @staticmethod
    def summarize(records, parameters):
        summary = {'max_squared_norm': max(r['max_squared_norm'] for r in records)}
        checks = {
            'families_anticommute': all(r['verified'] for r in records),
            'norm_bounded': summary['max_squared_norm'] <= 1 + parameters['tolerance'],
        }
        return summary, checks


EXPERIMENTS = {
    'zb_sweep': ZbSweep,
    'pq_check': PqCheck,
    'tree_build': TreeBuild,
    'section4_pipeline': StrategyPipeline,
    'membership': Membership,
    'werner_thresholds': WernerThresholds,
    'chsh': Chsh,
    'budget': Budget,
    'norm_bound': NormBound,
}
