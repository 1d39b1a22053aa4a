use crate::error::{Error, Result};
use crate::netgen::{connected_components, Components, ContactNetwork};

fn check(components: &Components, ever_infected: &[bool], top_n: usize) -> Result<usize> {
    if top_n == 0 {
        return Err(Error::param("top_n", "must be >= 1"));
    }
    if components.label.len() != ever_infected.len() {
        return Err(Error::param(
            "ever_infected",
            format!("{} flags for {} nodes", ever_infected.len(), components.label.len()),
        ));
    }
    Ok(top_n.min(components.sizes.len()))
}

fn infected_per_component(components: &Components, ever_infected: &[bool], top: usize) -> Vec<usize> {
    let mut infected = vec![0usize; top];
    for (&label, _) in components.label.iter().zip(ever_infected).filter(|(_, &inf)| inf) {
        if (label as usize) < top {
            infected[label as usize] += 1;
        }
    }
    infected
}

/// Ever-infected share of the population living in the `top_n` largest
/// connected components of `net` (all of them if there are fewer).
pub fn community_infection(net: &ContactNetwork, ever_infected: &[bool], top_n: usize) -> Result<f64> {
    community_infection_in(&connected_components(net), ever_infected, top_n)
}

/// [`community_infection`] with the components already computed.
pub fn community_infection_in(components: &Components, ever_infected: &[bool], top_n: usize) -> Result<f64> {
    let top = check(components, ever_infected, top_n)?;
    if top == 0 {
        return Ok(0.0);
    }
    let infected: usize = infected_per_component(components, ever_infected, top).iter().sum();
    let size: usize = components.sizes[..top].iter().sum();
    Ok(infected as f64 / size as f64)
}

/// Unweighted mean over the `top_n` largest components of each component's
/// ever-infected fraction.
pub fn component_mean_infection(components: &Components, ever_infected: &[bool], top_n: usize) -> Result<f64> {
    let top = check(components, ever_infected, top_n)?;
    if top == 0 {
        return Ok(0.0);
    }
    let infected = infected_per_component(components, ever_infected, top);
    let sum: f64 = infected
        .iter()
        .zip(&components.sizes)
        .map(|(&i, &s)| i as f64 / s as f64)
        .sum();
    Ok(sum / top as f64)
}
