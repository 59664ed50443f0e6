import { SessionClient } from './api.js';
import { NetViewer } from './viewer.js';

const base = new URLSearchParams(location.search).get('server')
  ?? 'http://127.0.0.1:8742';
const root = document.getElementById('app');
if (root) {
  const viewer = new NetViewer(new SessionClient(base), root);
  void viewer.start();
}
