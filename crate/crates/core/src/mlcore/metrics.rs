use crate::oracle::TimingRecord;

/// Fraction of positions where `pred` equals `truth`. Empty input scores 0.
pub fn accuracy(pred: &[usize], truth: &[usize]) -> f64 {
    assert_eq!(pred.len(), truth.len());
    if pred.is_empty() {
        return 0.0;
    }
    pred.iter().zip(truth).filter(|(p, t)| p == t).count() as f64 / pred.len() as f64
}

/// Fraction of problems whose chosen ordering costs at most
/// `(1 + x/100)` times the cheapest one.
pub fn metric_accuracy_within(pred: &[usize], timings: &[TimingRecord], x_percent: f64) -> f64 {
    assert_eq!(pred.len(), timings.len());
    if pred.is_empty() {
        return 0.0;
    }
    let factor = 1.0 + x_percent / 100.0;
    let hits = pred.iter().zip(timings).filter(|(&p, t)| t.costs[p] <= factor * t.min_cost()).count();
    hits as f64 / pred.len() as f64
}

pub fn metric_total_time(pred: &[usize], timings: &[TimingRecord], prediction_seconds: f64) -> f64 {
    assert_eq!(pred.len(), timings.len());
    prediction_seconds + pred.iter().zip(timings).map(|(&p, t)| t.costs[p]).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(costs: &[f64]) -> TimingRecord {
        TimingRecord { problem_id: 0, costs: costs.to_vec(), timed_out: vec![false; costs.len()] }
    }

    #[test]
    fn within_x() {
        let t = [rec(&[1.0, 1.05, 2.0])];
        assert_eq!(metric_accuracy_within(&[1], &t, 10.0), 1.0);
        assert_eq!(metric_accuracy_within(&[1], &t, 0.0), 0.0);
        assert_eq!(metric_accuracy_within(&[0], &t, 0.0), 1.0);
        assert_eq!(metric_accuracy_within(&[2], &t, 100.0), 1.0);
    }

    #[test]
    fn total_time() {
        assert_eq!(metric_total_time(&[1], &[rec(&[2.0, 5.0])], 0.5), 5.5);
        assert_eq!(accuracy(&[0, 1, 2, 2], &[0, 1, 1, 2]), 0.75);
    }
}
