/** three.js scene wiring: net mesh, stripe wireframe, sphere and axis
 * overlays, diagnostics panel.  Browser-only; the math stays on the
 * server and in decode.ts.
 */

import * as THREE from 'three';
import { SessionClient, ServerError } from './api.js';
import { foldingAxis, decodeSphere } from './decode.js';
import { netToMesh, NetMesh } from './mesh.js';
import { FoldResponse, NetDoc, ReportDoc } from './types.js';
import { ViewState, applyNet, flattenAll, initialState, lambdaToSlider,
         setLambda, sliderToLambda } from './state.js';

const SPHERE_RADIUS_CAP = 25;

export class NetViewer {
  private scene = new THREE.Scene();
  private camera: THREE.PerspectiveCamera;
  private renderer: THREE.WebGLRenderer;
  private meshGroup = new THREE.Group();
  private overlayGroup = new THREE.Group();
  private state: ViewState = initialState();
  private sliderBox: HTMLElement;
  private panel: HTMLElement;
  private toast: HTMLElement;
  private dragging: number | null = null;

  constructor(private client: SessionClient, root: HTMLElement) {
    this.camera = new THREE.PerspectiveCamera(
      45, 4 / 3, 0.01, 1000);
    this.camera.position.set(4, -6, 5);
    this.camera.up.set(0, 0, 1);
    this.camera.lookAt(0, 0, 0);
    this.renderer = new THREE.WebGLRenderer({ antialias: true });
    this.renderer.setSize(800, 600);
    root.appendChild(this.renderer.domElement);
    this.scene.add(new THREE.AmbientLight(0xffffff, 0.7));
    const sun = new THREE.DirectionalLight(0xffffff, 1.2);
    sun.position.set(3, -4, 8);
    this.scene.add(sun, this.meshGroup, this.overlayGroup);

    this.sliderBox = document.createElement('div');
    this.sliderBox.className = 'sliders';
    this.panel = document.createElement('pre');
    this.panel.className = 'diagnostics';
    this.toast = document.createElement('div');
    this.toast.className = 'toast';
    root.append(this.sliderBox, this.panel, this.toast);
  }

  async start(): Promise<void> {
    const payload = await this.client.getNet();
    this.apply(payload);
  }

  private apply(payload: FoldResponse | null): void {
    if (payload === null) return;   // stale response dropped by the client
    this.state = applyNet(this.state, payload.net, payload.report);
    this.rebuildScene(payload.net);
    this.rebuildSliders();
    this.renderDiagnostics(payload.report, payload.closure_residual);
    this.renderer.render(this.scene, this.camera);
  }

  private rebuildScene(net: NetDoc): void {
    this.meshGroup.clear();
    this.overlayGroup.clear();
    const mesh = netToMesh(net);
    const geom = new THREE.BufferGeometry();
    geom.setAttribute('position',
                      new THREE.BufferAttribute(mesh.positions, 3));
    geom.setAttribute('color', new THREE.BufferAttribute(mesh.colors, 3));
    geom.setIndex(new THREE.BufferAttribute(mesh.indices, 1));
    geom.computeVertexNormals();
    const mat = new THREE.MeshStandardMaterial({
      vertexColors: true, side: THREE.DoubleSide, flatShading: true,
    });
    this.meshGroup.add(new THREE.Mesh(geom, mat));
    this.meshGroup.add(this.stripeLines(mesh, net.closed_stripes));
    if (this.state.overlays.axes) this.addAxes(net);
    if (this.state.overlays.spheres) this.addSpheres(net);
  }

  private stripeLines(mesh: NetMesh, closed: boolean): THREE.Group {
    const group = new THREE.Group();
    const mat = new THREE.LineBasicMaterial({ color: 0x202020 });
    for (let i = 0; i < mesh.stripes; i++) {
      const pts: THREE.Vector3[] = [];
      for (let t = 0; t < mesh.verticesPerStripe; t++) {
        const o = (i * mesh.verticesPerStripe + t) * 3;
        pts.push(new THREE.Vector3(mesh.positions[o], mesh.positions[o + 1],
                                   mesh.positions[o + 2]));
      }
      if (closed) pts.push(pts[0].clone());
      const geom = new THREE.BufferGeometry().setFromPoints(pts);
      group.add(new THREE.Line(geom, mat));
    }
    return group;
  }

  private addAxes(net: NetDoc): void {
    const complexes = net.meta.m_complexes;
    if (!complexes) return;
    const mat = new THREE.LineDashedMaterial({
      color: 0x3355cc, dashSize: 0.1, gapSize: 0.06 });
    for (const m of complexes) {
      const axis = foldingAxis(m);
      if (!axis.real || axis.kind !== 'circle' || !axis.center) continue;
      const curve = new THREE.EllipseCurve(
        0, 0, axis.radius ?? 1, axis.radius ?? 1, 0, 2 * Math.PI, false, 0);
      const pts = curve.getPoints(96).map(
        (p) => new THREE.Vector3(p.x + axis.center![0],
                                 p.y + axis.center![1], axis.center![2]));
      const geom = new THREE.BufferGeometry().setFromPoints(pts);
      const line = new THREE.Line(geom, mat);
      line.computeLineDistances();
      this.overlayGroup.add(line);
    }
  }

  private addSpheres(net: NetDoc): void {
    const mat = new THREE.MeshStandardMaterial({
      color: 0x88aaff, transparent: true, opacity: 0.15,
      side: THREE.DoubleSide });
    for (const s of net.spheres) {
      const shape = decodeSphere(s);
      if (shape.kind !== 'sphere' || !shape.center) continue;
      const r = Math.abs(shape.radius ?? 0);
      if (r === 0 || r > SPHERE_RADIUS_CAP) continue;
      const ball = new THREE.Mesh(new THREE.SphereGeometry(r, 32, 16), mat);
      ball.position.set(...shape.center);
      this.overlayGroup.add(ball);
    }
  }

  private rebuildSliders(): void {
    this.sliderBox.textContent = '';
    this.state.lambdas.forEach((lam, gap) => {
      const input = document.createElement('input');
      input.type = 'range';
      input.min = '0';
      input.max = '1000';
      input.value = String(Math.round(lambdaToSlider(lam) * 1000));
      input.addEventListener('input', () => {
        const value = sliderToLambda(Number(input.value) / 1000);
        this.onSlider(gap, value);
      });
      this.sliderBox.appendChild(input);
    });
    const flat = document.createElement('button');
    flat.textContent = 'flatten';
    flat.addEventListener('click', () => {
      this.state = flattenAll(this.state);
      void this.refold();
    });
    const reflect = document.createElement('button');
    reflect.textContent = 'reflect';
    reflect.addEventListener('click', () => {
      void this.client.reflect().then((r) => this.apply(r))
        .catch((e) => this.fail(e));
    });
    const close = document.createElement('button');
    close.textContent = 'close torus';
    close.addEventListener('click', () => {
      void this.client.close(1, 4).then((r) => this.apply(r))
        .catch((e) => this.fail(e));
    });
    this.sliderBox.append(flat, reflect, close);
  }

  private onSlider(gap: number, value: number): void {
    this.state = setLambda(this.state, gap, value);
    void this.refold();
  }

  private async refold(): Promise<void> {
    try {
      this.apply(await this.client.fold(this.state.lambdas));
    } catch (e) {
      this.fail(e);
    }
  }

  private renderDiagnostics(report: ReportDoc, residual?: number): void {
    const lines = report.checks.map((c) => {
      const op = c.sense === 'max' ? '<=' : '>=';
      return `${c.passed ? 'PASS' : 'FAIL'} ${c.name}: ` +
        `${c.value.toExponential(2)} ${op} ${c.threshold.toExponential(0)}`;
    });
    if (residual !== undefined) {
      lines.push(`seam residual ${residual.toExponential(2)}`);
    }
    this.panel.textContent = lines.join('\n');
  }

  private fail(e: unknown): void {
    const msg = e instanceof ServerError
      ? `${e.type}: ${e.message}` : String(e);
    this.toast.textContent = msg;
    setTimeout(() => { this.toast.textContent = ''; }, 4000);
  }
}
