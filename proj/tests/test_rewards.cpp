#include <doctest.h>

#include <cmath>

#include "pwl/rewards.hpp"
#include "pwl/rng.hpp"

using namespace pwl;

namespace {

// context with perfect tracking and a quiet robot: every phi term is 1
RewardContext perfect_context() {
  RewardContext ctx;
  ctx.lin_vel_target = Vec3(0.3, 0, 0);
  ctx.lin_vel = ctx.lin_vel_target;
  ctx.ang_vel_target = Vec3::Zero();
  ctx.ang_vel = Vec3::Zero();
  ctx.base_height_target = 0.62;
  ctx.base_height = 0.62;
  ctx.projected_gravity = Vec3(0, 0, -1);
  ctx.tau = VecX::Zero(10);
  ctx.qdd = VecX::Zero(10);
  ctx.q = VecX::Zero(10);
  ctx.q_min = VecX::Constant(10, -1.0);
  ctx.q_max = VecX::Constant(10, 1.0);
  ctx.total_gravity = 30.0 * 9.81;
  ctx.desired_contact = {1, 0};
  ctx.contact = {1, 0};
  return ctx;
}

}  // namespace

TEST_CASE("gait phase and encoding") {
  SUBCASE("t = 0") {
    const GaitState g = advance_gait(0.0, 0.8, 0.6);
    CHECK(g.phase[0] == 0.0);
    CHECK(g.phase[1] == 0.5);
  }
  SUBCASE("t = T wraps") {
    const GaitState g = advance_gait(0.8, 0.8, 0.6);
    CHECK(g.phase[0] == doctest::Approx(0.0));
  }
  SUBCASE("t = 0.3T encoding") {
    const GaitState g = advance_gait(0.3 * 0.8, 0.8, 0.6);
    CHECK(g.phase_sin == doctest::Approx(0.9511).epsilon(1e-4));
    CHECK(g.phase_cos == doctest::Approx(-0.3090).epsilon(1e-4));
  }
}

TEST_CASE("desired contact pattern") {
  GaitState g = advance_gait(0.0, 0.8, 0.6);
  SUBCASE("phase 0.3 is stance at rho 0.6") {
    g.phase = {0.3, 0.8};
    auto c = desired_contacts(g);
    CHECK(c[0] == 1);
    CHECK(c[1] == 0);
  }
  SUBCASE("phase 0.7 is swing at rho 0.6") {
    g.phase = {0.7, 0.2};
    auto c = desired_contacts(g);
    CHECK(c[0] == 0);
    CHECK(c[1] == 1);
  }
  SUBCASE("double support at t = 0 for rho > 0.5") {
    const GaitState g0 = advance_gait(0.0, 0.8, 0.6);
    auto c = desired_contacts(g0);
    CHECK(c[0] == 1);
    CHECK(c[1] == 1);  // phase 0.5 < 0.6
  }
}

TEST_CASE("phi kernel") {
  SUBCASE("zero argument gives 1") {
    CHECK(phi_kernel(VecX::Zero(5), VecX::Constant(5, -3.0)) == 1.0);
  }
  SUBCASE("linear velocity weights case") {
    VecX psi(3), w(3);
    psi << 0.5, 0, 0;
    w << -4, -4, -0.4;
    CHECK(phi_kernel(psi, w) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  }
  SUBCASE("base height weight case") {
    VecX psi(1), w(1);
    psi << 0.01;
    w << -2000;
    CHECK(phi_kernel(psi, w) == doctest::Approx(std::exp(-0.2)).epsilon(1e-12));
  }
  SUBCASE("range (0,1] for nonpositive weights") {
    Rng rng(17);
    for (int t = 0; t < 200; ++t) {
      VecX psi(4), w(4);
      for (int i = 0; i < 4; ++i) {
        psi[i] = rng.uniform(-3, 3);
        w[i] = -rng.uniform(0, 10);
      }
      const double v = phi_kernel(psi, w);
      CHECK(v > 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("air time credit") {
  SUBCASE("landing after 0.4 s credits 0.1") {
    CHECK(air_time_credit({true, false}, {0.4, 0.0}) == doctest::Approx(0.1));
  }
  SUBCASE("no touchdown, no credit") {
    CHECK(air_time_credit({false, false}, {0.7, 0.2}) == 0.0);
  }
  SUBCASE("short hop is penalized") {
    CHECK(air_time_credit({true, false}, {0.1, 0.0}) == doctest::Approx(-0.2));
  }
}

TEST_CASE("reward terms on fixed contexts") {
  const RewardWeights weights;

  SUBCASE("perfect tracking: tracking terms contribute weight x 1") {
    const auto r = compute_reward(perfect_context(), weights, false);
    CHECK(r.unweighted[0] == doctest::Approx(1.0));  // lin vel
    CHECK(r.weighted[0] == doctest::Approx(1.0));
    CHECK(r.unweighted[1] == doctest::Approx(1.0));  // ang vel
    CHECK(r.weighted[1] == doctest::Approx(0.5));
    CHECK(r.unweighted[2] == doctest::Approx(1.0));  // height
    CHECK(r.unweighted[8] == doctest::Approx(1.0));  // contact pattern
    CHECK(r.weighted[3] == doctest::Approx(-2.0));   // orientation floor 0.1 x -20
  }

  SUBCASE("joint limit violation of 0.1 rad weighs in at -1.0") {
    RewardContext ctx = perfect_context();
    ctx.q[4] = ctx.q_max[4] + 0.1;
    const auto r = compute_reward(ctx, weights, false);
    CHECK(r.unweighted[6] == doctest::Approx(0.01).epsilon(1e-9));
    CHECK(r.weighted[6] == doctest::Approx(-1.0).epsilon(1e-9));
  }

  SUBCASE("contact mismatch: one foot wrong gives 0.5, weighted 0.25") {
    RewardContext ctx = perfect_context();
    ctx.desired_contact = {1, 0};
    ctx.contact = {1, 1};
    const auto r = compute_reward(ctx, weights, false);
    CHECK(r.unweighted[8] == doctest::Approx(0.5));
    CHECK(r.weighted[8] == doctest::Approx(0.25));
  }

  SUBCASE("air time credit of 0.1 passes through") {
    RewardContext ctx = perfect_context();
    ctx.touchdown = {true, false};
    ctx.landed_air_time = {0.4, 0.0};
    const auto r = compute_reward(ctx, weights, false);
    CHECK(r.unweighted[7] == doctest::Approx(0.1));
    CHECK(r.weighted[7] == doctest::Approx(0.1));
  }

  SUBCASE("torque regularizer: default penalizes, literal flag reproduces the printed form") {
    RewardContext ctx = perfect_context();
    ctx.tau = VecX::Constant(10, 29.43);  // |tau|_1 = 294.3 = G
    auto r = compute_reward(ctx, weights, false);
    CHECK(r.unweighted[5] == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
    RewardWeights literal = weights;
    literal.literal_torque_reward = true;
    r = compute_reward(ctx, literal, false);
    CHECK(r.unweighted[5] == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
  }

  SUBCASE("step height: saturating default and literal form") {
    RewardContext ctx = perfect_context();
    ctx.foot_height = {0.12, 0.0};
    ctx.foot_height_target = {0.08, 0.0};
    auto r = compute_reward(ctx, weights, false);
    CHECK(r.unweighted[12] == doctest::Approx(0.08));  // min saturates at target
    RewardWeights literal = weights;
    literal.literal_step_height = true;
    r = compute_reward(ctx, literal, false);
    CHECK(r.unweighted[12] == doctest::Approx(0.12));
  }

  SUBCASE("passive term: bounded by 0.05, maximal at alpha command 0") {
    RewardContext ctx = perfect_context();
    ctx.alpha_command = VecX::Zero(10);
    auto r = compute_reward(ctx, weights, true);
    CHECK(r.unweighted[13] == doctest::Approx(10.0));
    CHECK(r.weighted[13] == doctest::Approx(0.05).epsilon(1e-12));
    ctx.alpha_command = VecX::Ones(10);
    r = compute_reward(ctx, weights, true);
    CHECK(r.weighted[13] == doctest::Approx(0.0));
  }
}

TEST_CASE("reward is mirror symmetric") {
  Rng rng(23);
  const RewardWeights weights;
  for (int trial = 0; trial < 20; ++trial) {
    RewardContext ctx = perfect_context();
    ctx.lin_vel = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-0.2, 0.2));
    ctx.ang_vel = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    ctx.projected_gravity = Vec3(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), -1).normalized();
    for (int i = 0; i < 10; ++i) {
      ctx.tau[i] = rng.uniform(-30, 30);
      ctx.qdd[i] = rng.uniform(-50, 50);
      ctx.q[i] = rng.uniform(-1.2, 1.2);
    }
    ctx.contact = {rng.uniform() < 0.5 ? 1 : 0, rng.uniform() < 0.5 ? 1 : 0};
    ctx.desired_contact = {1, 0};
    ctx.foot_position[0] = Vec3(rng.uniform(-.1, .1), 0.09, 0);
    ctx.foot_position[1] = Vec3(rng.uniform(-.1, .1), -0.09, 0);
    ctx.foot_position_target[0] = Vec3(0, 0.09, 0);
    ctx.foot_position_target[1] = Vec3(0, -0.09, 0);
    ctx.foot_height = {rng.uniform(0, 0.1), rng.uniform(0, 0.1)};
    ctx.foot_height_target = {0.08, 0.0};

    RewardContext mir = ctx;
    mir.lin_vel = mirror_vec(ctx.lin_vel);
    mir.lin_vel_target = mirror_vec(ctx.lin_vel_target);
    // angular velocity is a pseudovector: x and z components flip
    mir.ang_vel = Vec3(-ctx.ang_vel.x(), ctx.ang_vel.y(), -ctx.ang_vel.z());
    mir.ang_vel_target = Vec3(-ctx.ang_vel_target.x(), ctx.ang_vel_target.y(),
                              -ctx.ang_vel_target.z());
    mir.projected_gravity = mirror_vec(ctx.projected_gravity);
    mir.q = mirror_joints(ctx.q);
    mir.q_min = VecX::Constant(10, -1.3);  // symmetric bounds for the mirror check
    mir.q_max = VecX::Constant(10, 1.3);
    RewardContext base = ctx;
    base.q_min = mir.q_min;
    base.q_max = mir.q_max;
    mir.qdd = mirror_joints(ctx.qdd);
    mir.tau = mirror_joints(ctx.tau);
    for (int s = 0; s < 2; ++s) {
      mir.contact[s] = ctx.contact[1 - s];
      mir.desired_contact[s] = ctx.desired_contact[1 - s];
      mir.air_time[s] = ctx.air_time[1 - s];
      mir.touchdown[s] = ctx.touchdown[1 - s];
      mir.landed_air_time[s] = ctx.landed_air_time[1 - s];
      mir.foot_down[s] = mirror_vec(ctx.foot_down[1 - s]);
      mir.foot_forward[s] = mirror_vec(ctx.foot_forward[1 - s]);
      mir.foot_position[s] = mirror_vec(ctx.foot_position[1 - s]);
      mir.foot_position_target[s] = mirror_vec(ctx.foot_position_target[1 - s]);
      mir.foot_height[s] = ctx.foot_height[1 - s];
      mir.foot_height_target[s] = ctx.foot_height_target[1 - s];
    }

    const auto ra = compute_reward(base, weights, false);
    const auto rb = compute_reward(mir, weights, false);
    CHECK(ra.total == doctest::Approx(rb.total).epsilon(1e-12));
  }
}

TEST_CASE("every term is finite for finite contexts") {
  Rng rng(29);
  const RewardWeights weights;
  for (int trial = 0; trial < 100; ++trial) {
    RewardContext ctx = perfect_context();
    for (int i = 0; i < 10; ++i) {
      ctx.tau[i] = rng.uniform(-300, 300);
      ctx.qdd[i] = rng.uniform(-1000, 1000);
      ctx.q[i] = rng.uniform(-3, 3);
    }
    ctx.lin_vel = Vec3(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
    ctx.base_height = rng.uniform(-1, 2);
    ctx.alpha_command = VecX::Constant(10, rng.uniform(0.0, 1.0));
    const auto r = compute_reward(ctx, weights, true);
    CHECK(std::isfinite(r.total));
  }
}
