#pragma once
/**
 * @file    geometry.hpp
 * @brief   Planar workspace primitives, robot kinematics and collision tests.
 *
 * Conventions:
 * - Angles are wrapped into (-pi, pi].
 * - Polygons are convex and counter-clockwise.
 * - Touching boundaries do not count as a collision; overlaps must have
 *   positive depth.
 * - Every robot body is tagged as either structure or gripper. Gripper
 *   contact with the target object is how picking happens, so target
 *   checks (ContactMode::Target) skip gripper bodies.
 */

#include <smcr/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace smcr
{
    inline constexpr double kPi = std::numbers::pi;

    [[nodiscard]] inline double wrapAngle (double a) noexcept
    {
        double w = std::remainder (a, 2.0 * kPi);
        if (w <= -kPi)
            w += 2.0 * kPi;
        return w;
    }

    /// Signed shortest-arc difference @p to - @p from, in (-pi, pi].
    [[nodiscard]] inline double angleDiff (double from, double to) noexcept { return wrapAngle (to - from); }

    [[nodiscard]] constexpr double degToRad (double deg) noexcept { return deg * kPi / 180.0; }
    [[nodiscard]] constexpr double radToDeg (double rad) noexcept { return rad * 180.0 / kPi; }

    // ------------------------------------------------------------------
    // Points and poses
    // ------------------------------------------------------------------

    struct Vec2
    {
        double x{0.0};
        double y{0.0};

        friend constexpr Vec2 operator+ (Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
        friend constexpr Vec2 operator- (Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
        friend constexpr Vec2 operator* (double s, Vec2 a) noexcept { return {s * a.x, s * a.y}; }
        friend constexpr bool operator== (const Vec2 &, const Vec2 &) = default;

        [[nodiscard]] constexpr double dot (Vec2 o) const noexcept { return x * o.x + y * o.y; }
        [[nodiscard]] constexpr double cross (Vec2 o) const noexcept { return x * o.y - y * o.x; }
        [[nodiscard]] double norm () const noexcept { return std::hypot (x, y); }
        [[nodiscard]] constexpr Vec2 perp () const noexcept { return {-y, x}; }
    };

    [[nodiscard]] inline Vec2 rotate (Vec2 v, double theta) noexcept
    {
        const double c = std::cos (theta);
        const double s = std::sin (theta);
        return {c * v.x - s * v.y, s * v.x + c * v.y};
    }

    /// SE(2) pose; theta is always stored wrapped.
    struct Pose2
    {
        double x{0.0};
        double y{0.0};
        double theta{0.0};

        constexpr Pose2 () = default;
        Pose2 (double px, double py, double ptheta) : x (px), y (py), theta (wrapAngle (ptheta)) {}

        [[nodiscard]] Vec2 position () const noexcept { return {x, y}; }
        [[nodiscard]] Vec2 transform (Vec2 local) const noexcept { return position () + rotate (local, theta); }

        friend bool operator== (const Pose2 &, const Pose2 &) = default;
    };

    /// Translation distance between two poses.
    [[nodiscard]] inline double translationDistance (const Pose2 &a, const Pose2 &b) noexcept { return (a.position () - b.position ()).norm (); }

    /// Absolute shortest-arc rotation distance between two poses.
    [[nodiscard]] inline double rotationDistance (const Pose2 &a, const Pose2 &b) noexcept { return std::abs (angleDiff (a.theta, b.theta)); }

    // ------------------------------------------------------------------
    // Shapes
    // ------------------------------------------------------------------

    struct Disc
    {
        double radius{0.0};
        friend bool operator== (const Disc &, const Disc &) = default;
    };

    struct ConvexPolygon
    {
        std::vector<Vec2> vertices;
        friend bool operator== (const ConvexPolygon &, const ConvexPolygon &) = default;
    };

    /// Body-frame object shape. Validated on construction.
    class Shape
    {
      public:
        using Variant = std::variant<Disc, ConvexPolygon>;

        Shape () : Shape (Disc{1.0}) {}
        explicit Shape (Disc d) : v_ (d)
        {
            if (!(d.radius > 0.0))
                throw InvalidInput ("disc radius must be positive");
        }
        explicit Shape (ConvexPolygon p) : v_ (std::move (p)) { validatePolygon (std::get<ConvexPolygon> (v_).vertices); }

        static Shape disc (double radius) { return Shape (Disc{radius}); }

        /// Axis-aligned rectangle centred on the body origin.
        static Shape box (double width, double height)
        {
            if (!(width > 0.0) || !(height > 0.0))
                throw InvalidInput ("box extents must be positive");
            const double hw = width / 2.0, hh = height / 2.0;
            return Shape (ConvexPolygon{{{-hw, -hh}, {hw, -hh}, {hw, hh}, {-hw, hh}}});
        }

        [[nodiscard]] const Variant &variant () const noexcept { return v_; }
        [[nodiscard]] bool isDisc () const noexcept { return std::holds_alternative<Disc> (v_); }

        /// Radius of the smallest origin-centred disc containing the shape.
        [[nodiscard]] double boundingRadius () const noexcept
        {
            if (const auto *d = std::get_if<Disc> (&v_))
                return d->radius;
            double r = 0.0;
            for (const Vec2 &p : std::get<ConvexPolygon> (v_).vertices)
                r = std::max (r, p.norm ());
            return r;
        }

        friend bool operator== (const Shape &, const Shape &) = default;

        static void validatePolygon (std::span<const Vec2> v)
        {
            if (v.size () < 3)
                throw InvalidInput ("polygon needs at least 3 vertices");
            for (std::size_t i = 0; i < v.size (); ++i)
            {
                const Vec2 a = v[i], b = v[(i + 1) % v.size ()], c = v[(i + 2) % v.size ()];
                if ((b - a).cross (c - b) <= 0.0)
                    throw InvalidInput ("polygon must be convex and counter-clockwise");
            }
        }

      private:
        Variant v_;
    };

    // ------------------------------------------------------------------
    // World-frame geometry
    // ------------------------------------------------------------------

    struct Aabb
    {
        Vec2 lo{std::numeric_limits<double>::infinity (), std::numeric_limits<double>::infinity ()};
        Vec2 hi{-std::numeric_limits<double>::infinity (), -std::numeric_limits<double>::infinity ()};

        void expand (Vec2 p) noexcept
        {
            lo = {std::min (lo.x, p.x), std::min (lo.y, p.y)};
            hi = {std::max (hi.x, p.x), std::max (hi.y, p.y)};
        }
        void expand (const Aabb &o) noexcept
        {
            if (o.empty ())
                return;
            expand (o.lo);
            expand (o.hi);
        }
        [[nodiscard]] bool empty () const noexcept { return lo.x > hi.x; }
        [[nodiscard]] bool overlaps (const Aabb &o) const noexcept
        {
            return lo.x < o.hi.x && o.lo.x < hi.x && lo.y < o.hi.y && o.lo.y < hi.y;
        }
    };

    struct WorldDisc
    {
        Vec2 center;
        double radius{0.0};
    };

    struct WorldPolygon
    {
        std::vector<Vec2> vertices;
    };

    using WorldShape = std::variant<WorldDisc, WorldPolygon>;

    [[nodiscard]] inline WorldShape place (const Shape &shape, const Pose2 &pose)
    {
        if (const auto *d = std::get_if<Disc> (&shape.variant ()))
            return WorldDisc{pose.position (), d->radius};
        WorldPolygon out;
        const auto &local = std::get<ConvexPolygon> (shape.variant ()).vertices;
        out.vertices.reserve (local.size ());
        for (const Vec2 &p : local)
            out.vertices.push_back (pose.transform (p));
        return out;
    }

    [[nodiscard]] inline Aabb bounds (const WorldShape &s) noexcept
    {
        Aabb box;
        if (const auto *d = std::get_if<WorldDisc> (&s))
        {
            box.lo = {d->center.x - d->radius, d->center.y - d->radius};
            box.hi = {d->center.x + d->radius, d->center.y + d->radius};
            return box;
        }
        for (const Vec2 &p : std::get<WorldPolygon> (s).vertices)
            box.expand (p);
        return box;
    }

    namespace detail
    {
        inline void project (std::span<const Vec2> poly, Vec2 axis, double &lo, double &hi) noexcept
        {
            lo = std::numeric_limits<double>::infinity ();
            hi = -lo;
            for (const Vec2 &p : poly)
            {
                const double d = p.dot (axis);
                lo = std::min (lo, d);
                hi = std::max (hi, d);
            }
        }

        /// True if some edge normal of @p a separates the two polygons.
        inline bool hasSeparatingAxis (std::span<const Vec2> a, std::span<const Vec2> b) noexcept
        {
            for (std::size_t i = 0; i < a.size (); ++i)
            {
                const Vec2 edge = a[(i + 1) % a.size ()] - a[i];
                const Vec2 axis{edge.y, -edge.x};
                double alo, ahi, blo, bhi;
                project (a, axis, alo, ahi);
                project (b, axis, blo, bhi);
                if (ahi <= blo || bhi <= alo)
                    return true;
            }
            return false;
        }

        inline double pointSegmentDistance (Vec2 p, Vec2 a, Vec2 b) noexcept
        {
            const Vec2 ab = b - a;
            const double len2 = ab.dot (ab);
            double t = len2 > 0.0 ? (p - a).dot (ab) / len2 : 0.0;
            t = std::clamp (t, 0.0, 1.0);
            return (p - (a + t * ab)).norm ();
        }

        inline bool polygonsIntersect (std::span<const Vec2> a, std::span<const Vec2> b) noexcept
        {
            return !hasSeparatingAxis (a, b) && !hasSeparatingAxis (b, a);
        }

        inline bool discPolygonIntersect (const WorldDisc &d, std::span<const Vec2> poly) noexcept
        {
            bool inside = true;
            for (std::size_t i = 0; i < poly.size (); ++i)
            {
                const Vec2 a = poly[i], b = poly[(i + 1) % poly.size ()];
                if (pointSegmentDistance (d.center, a, b) < d.radius)
                    return true;
                if ((b - a).cross (d.center - a) < 0.0)
                    inside = false;
            }
            return inside;
        }
    } // namespace detail

    /// Exact overlap test between two world-frame shapes.
    [[nodiscard]] inline bool intersects (const WorldShape &a, const WorldShape &b) noexcept
    {
        const auto *da = std::get_if<WorldDisc> (&a);
        const auto *db = std::get_if<WorldDisc> (&b);
        if (da && db)
            return (da->center - db->center).norm () < da->radius + db->radius;
        if (da)
            return detail::discPolygonIntersect (*da, std::get<WorldPolygon> (b).vertices);
        if (db)
            return detail::discPolygonIntersect (*db, std::get<WorldPolygon> (a).vertices);
        return detail::polygonsIntersect (std::get<WorldPolygon> (a).vertices, std::get<WorldPolygon> (b).vertices);
    }

    /// A body-frame shape placed at a world pose.
    struct PlacedShape
    {
        Shape shape;
        Pose2 pose;

        [[nodiscard]] WorldShape world () const { return place (shape, pose); }
        friend bool operator== (const PlacedShape &, const PlacedShape &) = default;
    };

    // ------------------------------------------------------------------
    // Robots and configurations
    // ------------------------------------------------------------------

    struct DiscRobot
    {
        double radius{0.0};
        friend bool operator== (const DiscRobot &, const DiscRobot &) = default;
    };

    /// Serial planar arm with revolute joints. Link i is a rectangle of
    /// width linkWidth; the distal toolLength of the last link is the gripper.
    struct PlanarArm
    {
        Vec2 base;
        std::vector<double> linkLengths;
        double linkWidth{0.0};
        double toolLength{0.0};
        friend bool operator== (const PlanarArm &, const PlanarArm &) = default;
    };

    class Configuration
    {
      public:
        Configuration () = default;
        Configuration (std::initializer_list<double> v) : values_ (v) {}
        explicit Configuration (std::vector<double> v) : values_ (std::move (v)) {}

        [[nodiscard]] std::size_t size () const noexcept { return values_.size (); }
        [[nodiscard]] double operator[] (std::size_t i) const noexcept { return values_[i]; }
        [[nodiscard]] double &operator[] (std::size_t i) noexcept { return values_[i]; }
        [[nodiscard]] const std::vector<double> &values () const noexcept { return values_; }

        friend bool operator== (const Configuration &, const Configuration &) = default;
        friend auto operator<=> (const Configuration &a, const Configuration &b) { return a.values_ <=> b.values_; }

      private:
        std::vector<double> values_;
    };

    /// A robot body in world frame.
    struct RobotBody
    {
        WorldShape shape;
        bool gripper{false};
    };

    struct Kinematics
    {
        std::vector<RobotBody> bodies;
        Pose2 endEffector;
    };

    enum class ContactMode
    {
        Obstacle, ///< every robot body counts
        Target,   ///< gripper bodies may touch the object
    };

    class RobotModel
    {
      public:
        using Variant = std::variant<DiscRobot, PlanarArm>;

        RobotModel () : RobotModel (DiscRobot{1.0}) {}
        explicit RobotModel (DiscRobot d) : v_ (d)
        {
            if (!(d.radius > 0.0))
                throw InvalidInput ("disc robot radius must be positive");
        }
        explicit RobotModel (PlanarArm a) : v_ (std::move (a))
        {
            const auto &arm = std::get<PlanarArm> (v_);
            if (arm.linkLengths.empty ())
                throw InvalidInput ("arm needs at least one link");
            for (double l : arm.linkLengths)
                if (!(l > 0.0))
                    throw InvalidInput ("arm link lengths must be positive");
            if (!(arm.linkWidth > 0.0))
                throw InvalidInput ("arm link width must be positive");
            if (arm.toolLength < 0.0 || arm.toolLength > arm.linkLengths.back ())
                throw InvalidInput ("tool length must lie within the last link");
        }

        [[nodiscard]] const Variant &variant () const noexcept { return v_; }
        [[nodiscard]] bool isArm () const noexcept { return std::holds_alternative<PlanarArm> (v_); }

        [[nodiscard]] std::size_t dof () const noexcept
        {
            if (const auto *a = std::get_if<PlanarArm> (&v_))
                return a->linkLengths.size ();
            return 2;
        }

        /// Whether configuration component @p i is an angle.
        [[nodiscard]] bool isAngular (std::size_t /*i*/) const noexcept { return isArm (); }

        /// Whether the end-effector orientation is meaningful for grasping.
        [[nodiscard]] bool hasOrientation () const noexcept { return isArm (); }

        void checkDimension (const Configuration &q) const
        {
            if (q.size () != dof ())
                throw InvalidInput ("configuration has " + std::to_string (q.size ()) + " values, robot expects " + std::to_string (dof ()));
        }

        /// Wraps angular components into (-pi, pi].
        [[nodiscard]] Configuration normalize (Configuration q) const
        {
            checkDimension (q);
            for (std::size_t i = 0; i < q.size (); ++i)
                if (isAngular (i))
                    q[i] = wrapAngle (q[i]);
            return q;
        }

        friend bool operator== (const RobotModel &, const RobotModel &) = default;

      private:
        Variant v_;
    };

    namespace detail
    {
        inline WorldPolygon linkRectangle (Vec2 from, Vec2 to, double width)
        {
            const Vec2 d = to - from;
            const double len = d.norm ();
            const Vec2 u = len > 0.0 ? (1.0 / len) * d : Vec2{1.0, 0.0};
            const Vec2 n = (width / 2.0) * u.perp ();
            return WorldPolygon{{from - n, to - n, to + n, from + n}};
        }
    } // namespace detail

    /// World-frame bodies of the robot at @p q and its end-effector frame
    /// (arm tip with the accumulated joint angle; disc centre with theta 0).
    [[nodiscard]] inline Kinematics forwardKinematics (const RobotModel &robot, const Configuration &q)
    {
        robot.checkDimension (q);
        Kinematics k;
        if (const auto *disc = std::get_if<DiscRobot> (&robot.variant ()))
        {
            k.bodies.push_back ({WorldDisc{{q[0], q[1]}, disc->radius}, true});
            k.endEffector = Pose2 (q[0], q[1], 0.0);
            return k;
        }
        const auto &arm = std::get<PlanarArm> (robot.variant ());
        const std::size_t n = arm.linkLengths.size ();
        k.bodies.reserve (n + 1);
        Vec2 joint = arm.base;
        double heading = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            heading += q[i];
            const Vec2 dir{std::cos (heading), std::sin (heading)};
            const Vec2 tip = joint + arm.linkLengths[i] * dir;
            if (i + 1 == n && arm.toolLength > 0.0)
            {
                const Vec2 wrist = tip - arm.toolLength * dir;
                if (arm.toolLength < arm.linkLengths[i])
                    k.bodies.push_back ({detail::linkRectangle (joint, wrist, arm.linkWidth), false});
                k.bodies.push_back ({detail::linkRectangle (wrist, tip, arm.linkWidth), true});
            }
            else
                k.bodies.push_back ({detail::linkRectangle (joint, tip, arm.linkWidth), false});
            joint = tip;
        }
        k.endEffector = Pose2 (joint.x, joint.y, heading);
        return k;
    }

    [[nodiscard]] inline bool bodiesHit (std::span<const RobotBody> bodies, const WorldShape &obstacle, ContactMode mode)
    {
        for (const RobotBody &b : bodies)
        {
            if (mode == ContactMode::Target && b.gripper)
                continue;
            if (intersects (b.shape, obstacle))
                return true;
        }
        return false;
    }

    [[nodiscard]] inline bool collidesAt (const RobotModel &robot, const Configuration &q, const WorldShape &obstacle,
                                          ContactMode mode = ContactMode::Obstacle)
    {
        return bodiesHit (forwardKinematics (robot, q).bodies, obstacle, mode);
    }

    [[nodiscard]] inline bool collidesAt (const RobotModel &robot, const Configuration &q, const PlacedShape &obstacle,
                                          ContactMode mode = ContactMode::Obstacle)
    {
        return collidesAt (robot, q, obstacle.world (), mode);
    }

    /// Euclidean configuration distance; angular components use the shortest arc.
    [[nodiscard]] inline double cDistance (const RobotModel &robot, const Configuration &a, const Configuration &b)
    {
        robot.checkDimension (a);
        robot.checkDimension (b);
        double sum = 0.0;
        for (std::size_t i = 0; i < a.size (); ++i)
        {
            const double d = robot.isAngular (i) ? angleDiff (a[i], b[i]) : b[i] - a[i];
            sum += d * d;
        }
        return std::sqrt (sum);
    }

    [[nodiscard]] inline Configuration interpolate (const RobotModel &robot, const Configuration &a, const Configuration &b, double t)
    {
        Configuration out = a;
        for (std::size_t i = 0; i < a.size (); ++i)
        {
            if (robot.isAngular (i))
                out[i] = wrapAngle (a[i] + t * angleDiff (a[i], b[i]));
            else
                out[i] = a[i] + t * (b[i] - a[i]);
        }
        return out;
    }

    /// Number of equal subdivisions used to discretize a motion of length
    /// @p distance. Always a power of two so that halving the resolution
    /// yields a superset of samples.
    [[nodiscard]] inline std::size_t subdivisions (double distance, double resolution)
    {
        if (!(resolution > 0.0))
            throw InvalidInput ("resolution must be positive");
        std::size_t n = 1;
        while (distance / static_cast<double> (n) > resolution)
            n *= 2;
        return n;
    }

    /**
     * @brief Discretized straight-line motion with cached robot geometry.
     *
     * Endpoints are put in a canonical order before interpolation so the
     * motion a->b and b->a produce bit-identical samples.
     */
    class SweptMotion
    {
      public:
        SweptMotion (const RobotModel &robot, const Configuration &from, const Configuration &to, double resolution)
        {
            robot.checkDimension (from);
            robot.checkDimension (to);
            const bool swap = to < from;
            const Configuration &a = swap ? to : from;
            const Configuration &b = swap ? from : to;
            const std::size_t n = subdivisions (cDistance (robot, a, b), resolution);
            const std::size_t samples = (a == b) ? 1 : n + 1;
            for (std::size_t i = 0; i < samples; ++i)
            {
                const double t = samples == 1 ? 0.0 : static_cast<double> (i) / static_cast<double> (n);
                Kinematics k = forwardKinematics (robot, i + 1 == samples && samples > 1 ? b : interpolate (robot, a, b, t));
                for (RobotBody &body : k.bodies)
                {
                    const Aabb box = smcr::bounds (body.shape);
                    bounds_.expand (box);
                    (body.gripper ? gripperBounds_ : structureBounds_).expand (box);
                    bodies_.push_back ({std::move (body), box});
                }
            }
        }

        /// Union of all body bounding boxes over the motion.
        [[nodiscard]] const Aabb &bounds () const noexcept { return bounds_; }

        [[nodiscard]] bool hits (const WorldShape &obstacle, ContactMode mode = ContactMode::Obstacle) const
        {
            return hits (obstacle, smcr::bounds (obstacle), mode);
        }

        /// As hits(obstacle, mode) with a precomputed obstacle box.
        [[nodiscard]] bool hits (const WorldShape &obstacle, const Aabb &obstacleBox, ContactMode mode) const
        {
            const Aabb &relevant = mode == ContactMode::Target ? structureBounds_ : bounds_;
            if (!relevant.overlaps (obstacleBox))
                return false;
            for (const auto &[body, box] : bodies_)
            {
                if (mode == ContactMode::Target && body.gripper)
                    continue;
                if (box.overlaps (obstacleBox) && intersects (body.shape, obstacle))
                    return true;
            }
            return false;
        }

      private:
        std::vector<std::pair<RobotBody, Aabb>> bodies_;
        Aabb bounds_;
        Aabb structureBounds_;
        Aabb gripperBounds_;
    };

    /// True iff the robot collides with @p obstacle at any sample of the
    /// straight motion from @p q1 to @p q2 (endpoints included).
    [[nodiscard]] inline bool segmentCollides (const RobotModel &robot, const Configuration &q1, const Configuration &q2,
                                               const WorldShape &obstacle, double resolution,
                                               ContactMode mode = ContactMode::Obstacle)
    {
        return SweptMotion (robot, q1, q2, resolution).hits (obstacle, mode);
    }

    [[nodiscard]] inline bool segmentCollides (const RobotModel &robot, const Configuration &q1, const Configuration &q2,
                                               const PlacedShape &obstacle, double resolution,
                                               ContactMode mode = ContactMode::Obstacle)
    {
        return segmentCollides (robot, q1, q2, obstacle.world (), resolution, mode);
    }

    /**
     * @brief Closed-form inverse kinematics placing the end effector at @p target.
     *
     * Disc robots return the single centred configuration. Two-link arms
     * solve for position only; three-link arms also match the orientation.
     * Both elbow branches are returned when they exist. Longer arms are not
     * supported and yield an empty list.
     */
    [[nodiscard]] inline std::vector<Configuration> inverseKinematics (const RobotModel &robot, const Pose2 &target)
    {
        std::vector<Configuration> out;
        if (!robot.isArm ())
        {
            out.push_back (Configuration{target.x, target.y});
            return out;
        }
        const auto &arm = std::get<PlanarArm> (robot.variant ());
        const auto &l = arm.linkLengths;
        if (l.size () == 1)
        {
            const Vec2 d = target.position () - arm.base;
            if (std::abs (d.norm () - l[0]) < 1e-9)
                out.push_back (Configuration{std::atan2 (d.y, d.x)});
            return out;
        }
        if (l.size () > 3)
            return out;

        Vec2 wrist = target.position () - arm.base;
        if (l.size () == 3)
            wrist = wrist - l[2] * Vec2{std::cos (target.theta), std::sin (target.theta)};
        const double d2 = wrist.dot (wrist);
        const double c2 = (d2 - l[0] * l[0] - l[1] * l[1]) / (2.0 * l[0] * l[1]);
        if (c2 < -1.0 - 1e-12 || c2 > 1.0 + 1e-12)
            return out;
        const double base2 = std::acos (std::clamp (c2, -1.0, 1.0));
        for (double q2 : {base2, -base2})
        {
            const double q1 = std::atan2 (wrist.y, wrist.x) - std::atan2 (l[1] * std::sin (q2), l[0] + l[1] * std::cos (q2));
            Configuration q = l.size () == 3 ? Configuration{q1, q2, target.theta - q1 - q2} : Configuration{q1, q2};
            q = robot.normalize (q);
            if (std::find (out.begin (), out.end (), q) == out.end ())
                out.push_back (std::move (q));
        }
        return out;
    }
} // namespace smcr
